#include "deperr/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deperr/errors.hpp"
#include "deperr/numeric.hpp"

namespace deperr {

namespace {

void require_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive (got t = " + std::to_string(t) + ")");
}

std::string where(Metric m, double t) {
    return std::string(metric_name(m)) + " at t = " + std::to_string(t);
}

double relative_error_from_states(const SeriesState& dep, const SeriesState& ind, Metric metric) {
    switch (metric) {
        case Metric::SF:
            return std::expm1(ind.cumulative_hazard - dep.cumulative_hazard);
        case Metric::FR:
            if (ind.hazard == 0.0) throw DivisionError("independent metric is zero: " + where(metric, ind.t));
            return (dep.hazard - ind.hazard) / ind.hazard;
        case Metric::RHR: {
            if (!(dep.cumulative_hazard > 0.0) || !(ind.cumulative_hazard > 0.0)) {
                throw SingularityError("reversed hazard rate undefined where SF = 1: " + where(metric, ind.t));
            }
            if (ind.hazard == 0.0) throw DivisionError("independent metric is zero: " + where(metric, ind.t));
            // mu_D / mu_I = (r_D / r_I) (e^{H_I} - 1) / (e^{H_D} - 1)
            return (dep.hazard / ind.hazard) * expm1_ratio(ind.cumulative_hazard, dep.cumulative_hazard) - 1.0;
        }
        case Metric::AI: {
            const double d = metric_from_state(dep, Metric::AI);
            const double i = metric_from_state(ind, Metric::AI);
            if (i == 0.0) throw DivisionError("independent metric is zero: " + where(metric, ind.t));
            return (d - i) / i;
        }
    }
    throw DomainError("unknown metric");
}

bool nondecreasing(const std::vector<double>& v, double tol) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double scale = std::max({1.0, std::fabs(v[k]), std::fabs(v[k - 1])});
        if (v[k] < v[k - 1] - tol * scale) return false;
    }
    return true;
}

bool nonincreasing(const std::vector<double>& v, double tol) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double scale = std::max({1.0, std::fabs(v[k]), std::fabs(v[k - 1])});
        if (v[k] > v[k - 1] + tol * scale) return false;
    }
    return true;
}

Trend trend_of(const std::vector<double>& v, bool& constant) {
    const bool inc = nondecreasing(v, kMonotoneTolerance);
    const bool dec = nonincreasing(v, kMonotoneTolerance);
    constant = inc && dec;
    if (constant) return Trend::Neither;
    if (inc) return Trend::Increasing;
    if (dec) return Trend::Decreasing;
    return Trend::Neither;
}

std::optional<double> mome_error(const ShockAggregate& a, Metric metric, double t) {
    const double extra = a.lambda - a.independent_lambda;
    switch (metric) {
        case Metric::SF: return std::expm1(-t * extra);
        case Metric::FR: return extra / a.independent_lambda;
        case Metric::RHR: return lemma_g(a.independent_lambda, a.lambda, t);
        case Metric::AI: return 0.0;
    }
    return std::nullopt;
}

std::optional<double> gumbel_error(const GumbelAggregate& a, Metric metric, double t) {
    const double a1 = a.order_sums.at(0);
    double extra = 0.0, dextra = 0.0, weighted = 0.0;  // interaction parts of theta, theta', sum (p-1) a_p t^p
    for (std::size_t k = 1; k < a.order_sums.size(); ++k) {
        const double p = static_cast<double>(k + 1);
        const double pw = std::pow(t, p);
        extra += a.order_sums[k] * pw;
        dextra += p * a.order_sums[k] * pw / t;
        weighted += (p - 1.0) * a.order_sums[k] * pw;
    }
    const double theta = a1 * t + extra;
    const double dtheta = a1 + dextra;
    switch (metric) {
        case Metric::SF: return std::expm1(-extra);
        case Metric::FR: return dextra / a1;
        case Metric::RHR: return (dtheta / a1) * expm1_ratio(a1 * t, theta) - 1.0;
        case Metric::AI: return weighted / theta;
    }
    return std::nullopt;
}

std::optional<double> momw_error(const WeibullShockParams& p, Metric metric, double t) {
    if (metric != Metric::SF && metric != Metric::FR) return std::nullopt;
    double extra = 0.0, dextra = 0.0, r_indep = 0.0;
    for (const auto& [s, rate] : p.rates.entries()) {
        double expo = 0.0;
        for (int i : subset_to_indices(s)) expo = std::max(expo, p.shapes[i - 1]);
        const double pw = std::pow(t, expo);
        if (subset_size(s) == 1) {
            r_indep += rate * expo * pw / t;
        } else {
            extra += rate * pw;
            dextra += rate * expo * pw / t;
        }
    }
    if (metric == Metric::SF) return std::expm1(-extra);
    return dextra / r_indep;
}

std::optional<double> crowder_error(const CrowderParams& p, Metric metric, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.lambdas.size(); ++i) s += p.lambdas[i] * std::pow(t, p.shapes[i]);
    const double cum = power_excess(p.gamma, s, p.l);
    const double ratio = p.l * std::pow(p.gamma + s, p.l - 1.0);  // r_D / r_I
    switch (metric) {
        case Metric::SF: return std::expm1(s - cum);
        case Metric::FR: return ratio - 1.0;
        case Metric::RHR: return ratio * expm1_ratio(s, cum) - 1.0;
        case Metric::AI: return ratio * s / cum - 1.0;
    }
    return std::nullopt;
}

std::optional<double> lee_error(const LeeAggregate& a, double alpha, Metric metric, double t) {
    switch (metric) {
        case Metric::SF: return std::expm1(-std::pow(t, alpha) * (a.lambda_l - a.independent_lambda));
        case Metric::FR: return a.lambda_l / a.independent_lambda - 1.0;
        case Metric::RHR: return lemma_h(a.independent_lambda, a.lambda_l, alpha, t);
        case Metric::AI: return 0.0;
    }
    return std::nullopt;
}

}  // namespace

double relative_error(const Model& model, Metric metric, double t) {
    require_time(t);
    const Model indep = independent_counterpart(model);
    return relative_error_from_states(series_state(model, t), series_state(indep, t), metric);
}

std::optional<double> closed_form_error(const Model& model, Metric metric, double t) {
    require_time(t);
    switch (model.family()) {
        case Family::IndepExp:
        case Family::MOME:
            return mome_error(std::get<ShockAggregate>(model.aggregates()), metric, t);
        case Family::MG1:
            return gumbel_error(std::get<GumbelAggregate>(model.aggregates()), metric, t);
        case Family::IndepWeibull:
        case Family::MOMW:
            return momw_error(model.params<WeibullShockParams>(), metric, t);
        case Family::Crowder:
        case Family::LeeII:
            return crowder_error(model.params<CrowderParams>(), metric, t);
        case Family::LeeML:
            return lee_error(std::get<LeeAggregate>(model.aggregates()), model.params<LeeParams>().shape, metric, t);
        case Family::LuBI:
            return std::nullopt;
    }
    return std::nullopt;
}

double lemma_g(double beta, double gamma, double x) {
    if (!(beta > 0.0) || !(gamma > 0.0) || !(x > 0.0)) {
        throw DomainError("lemma_g requires beta, gamma, x > 0");
    }
    const double a = beta * x, b = gamma * x;
    if (a == 0.0 || b == 0.0) return 0.0;  // x below the representable scale: the x -> 0 limit
    return (gamma / beta) * expm1_ratio(a, b) - 1.0;
}

double lemma_h(double beta, double gamma, double alpha, double x) {
    if (!(alpha > 0.0)) throw DomainError("lemma_h requires alpha > 0");
    if (!(beta > 0.0) || !(gamma > 0.0) || !(x > 0.0)) {
        throw DomainError("lemma_h requires beta, gamma, x > 0");
    }
    const double u = std::pow(x, alpha);
    if (u == 0.0) return 0.0;
    return lemma_g(beta, gamma, u);
}

std::string_view trend_name(Trend t, std::string_view inc, std::string_view dec) noexcept {
    switch (t) {
        case Trend::Increasing: return inc;
        case Trend::Decreasing: return dec;
        case Trend::Neither: return "neither";
    }
    return "neither";
}

std::string_view average_class_name(AverageClass c) noexcept {
    switch (c) {
        case AverageClass::IFRA: return "IFRA";
        case AverageClass::DFRA: return "DFRA";
        case AverageClass::Neither: return "neither";
    }
    return "neither";
}

AgingClass classify_aging(const Model& model, const EvaluationGrid& grid) {
    if (grid.size() < 3) throw DomainError("classify_aging needs at least 3 grid points");
    AgingClass out;
    out.evidence_grid = grid.points();
    for (double t : grid) {
        const SeriesState s = series_state(model, t);
        out.fr_values.push_back(s.hazard);
        out.fr_average.push_back(s.cumulative_hazard / t);
        out.ai_values.push_back(metric_from_state(s, Metric::AI));
    }
    out.fr = trend_of(out.fr_values, out.fr_constant);
    out.ai = trend_of(out.ai_values, out.ai_constant);

    const auto& ai = out.ai_values;
    out.ai_min = *std::min_element(ai.begin(), ai.end());
    out.ai_max = *std::max_element(ai.begin(), ai.end());
    if (out.ai_min >= 1.0 - kMonotoneTolerance) {
        out.fra = AverageClass::IFRA;
    } else if (out.ai_max <= 1.0 + kMonotoneTolerance) {
        out.fra = AverageClass::DFRA;
    }
    out.exponential = std::all_of(ai.begin(), ai.end(),
                                  [](double v) { return std::fabs(v - 1.0) <= kExponentialTolerance; });
    return out;
}

ErrorCurve error_curve(const Model& model, Metric metric, const EvaluationGrid& grid) {
    if (grid.size() == 0) throw DomainError("evaluation grid is empty");
    const Model indep = independent_counterpart(model);
    ErrorCurve curve{metric, {}};
    curve.points.reserve(grid.size());
    for (double t : grid) {
        const SeriesState d = series_state(model, t);
        const SeriesState i = series_state(indep, t);
        ErrorPoint pt{t, metric_from_state(d, metric), metric_from_state(i, metric), std::nullopt};
        try {
            pt.rel_err = relative_error_from_states(d, i, metric);
        } catch (const DivisionError&) {
            // flagged: independent reference is zero at this t
        }
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace deperr
