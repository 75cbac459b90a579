#include "deperr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deperr/errors.hpp"
#include "deperr/numeric.hpp"

namespace deperr {

// ---------------------------------------------------------------------------
// Subsets
// ---------------------------------------------------------------------------

std::string format_subset(SubsetMask s) {
    std::string out = "{";
    bool first = true;
    for (int i : subset_to_indices(s)) {
        if (!first) out += ',';
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

SubsetMask subset_from_indices(const std::vector<int>& one_based, int n) {
    if (one_based.empty()) throw ValidationError("subset", "empty subset");
    SubsetMask mask = 0;
    for (int i : one_based) {
        if (i < 1 || i > n || i > kMaxComponents) {
            throw ValidationError("subset", "component index " + std::to_string(i) + " outside 1.." +
                                                std::to_string(n));
        }
        const SubsetMask bit = SubsetMask{1} << (i - 1);
        if (mask & bit) throw ValidationError("subset", "repeated component index " + std::to_string(i));
        mask |= bit;
    }
    return mask;
}

std::vector<int> subset_to_indices(SubsetMask s) {
    std::vector<int> out;
    for (int i = 0; s != 0; ++i, s >>= 1) {
        if (s & 1u) out.push_back(i + 1);
    }
    return out;
}

double SubsetRates::component_total(int i) const {
    const SubsetMask bit = SubsetMask{1} << i;
    double total = 0.0;
    for (const auto& [s, rate] : rates_) {
        if (s & bit) total += rate;
    }
    return total;
}

void SubsetRates::check(const std::string& prefix) const {
    if (n_ < 1) throw ValidationError("n", "component count must be at least 1");
    if (n_ > kMaxComponents) {
        throw ValidationError("n", "component count " + std::to_string(n_) + " exceeds the supported maximum " +
                                       std::to_string(kMaxComponents));
    }
    for (const auto& [s, rate] : rates_) {
        const std::string path = prefix + format_subset(s);
        if (s == 0) throw ValidationError(prefix, "empty subset");
        if ((s & ~full_mask(n_)) != 0) throw ValidationError(path, "subset refers to a component beyond n");
        if (!std::isfinite(rate)) throw ValidationError(path, "rate is not finite");
        if (rate < 0.0) {
            std::ostringstream msg;
            msg << "negative rate (" << rate << ")";
            throw ValidationError(path, msg.str());
        }
    }
    for (int i = 0; i < n_; ++i) {
        if (!(component_total(i) > 0.0)) {
            throw ValidationError(prefix, "component " + std::to_string(i + 1) + " has zero total rate");
        }
    }
}

SubsetRates SubsetRates::canonical() const {
    SubsetRates out(n_);
    for (const auto& [s, rate] : rates_) {
        if (rate != 0.0) out.rates_.emplace(s, rate);
    }
    return out;
}

SubsetRates SubsetRates::singletons() const {
    SubsetRates out(n_);
    for (const auto& [s, rate] : rates_) {
        if (subset_size(s) == 1) out.rates_.emplace(s, rate);
    }
    return out;
}

bool SubsetRates::has_interactions() const {
    return std::any_of(rates_.begin(), rates_.end(),
                       [](const auto& kv) { return subset_size(kv.first) >= 2 && kv.second != 0.0; });
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<Family, std::string_view> kFamilyNames[] = {
    {Family::IndepExp, "IndepExp"}, {Family::MOME, "MOME"},       {Family::MG1, "MG1"},
    {Family::IndepWeibull, "IndepWeibull"}, {Family::MOMW, "MOMW"}, {Family::Crowder, "Crowder"},
    {Family::LeeII, "LeeII"},       {Family::LeeML, "LeeML"},     {Family::LuBI, "LuBI"},
};

}  // namespace

std::string_view family_name(Family f) noexcept {
    for (const auto& [fam, name] : kFamilyNames) {
        if (fam == f) return name;
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (const auto& [fam, n] : kFamilyNames) {
        if (n == name) return fam;
    }
    throw ValidationError("family", "unknown family \"" + std::string(name) + "\"");
}

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
        case Metric::SF: return "sf";
        case Metric::FR: return "fr";
        case Metric::RHR: return "rhr";
        case Metric::AI: return "ai";
    }
    return "?";
}

Metric parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics) {
        if (metric_name(m) == name) return m;
    }
    throw ValidationError("metric", "unknown metric \"" + std::string(name) + "\" (expected sf, fr, rhr or ai)");
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace {

SubsetRates singleton_rates(const std::vector<double>& lambdas) {
    SubsetRates r(static_cast<int>(lambdas.size()));
    for (std::size_t i = 0; i < lambdas.size() && i < static_cast<std::size_t>(kMaxComponents); ++i) {
        r.set(SubsetMask{1} << i, lambdas[i]);
    }
    return r;
}

}  // namespace

ModelSpec make_indep_exp(const std::vector<double>& lambdas) {
    return {Family::IndepExp, ExponentialParams{singleton_rates(lambdas)}};
}
ModelSpec make_mome(SubsetRates rates) { return {Family::MOME, ExponentialParams{std::move(rates)}}; }
ModelSpec make_mg1(SubsetRates rates) { return {Family::MG1, ExponentialParams{std::move(rates)}}; }
ModelSpec make_indep_weibull(const std::vector<double>& lambdas, std::vector<double> shapes) {
    return {Family::IndepWeibull, WeibullShockParams{singleton_rates(lambdas), std::move(shapes)}};
}
ModelSpec make_momw(SubsetRates rates, std::vector<double> shapes) {
    return {Family::MOMW, WeibullShockParams{std::move(rates), std::move(shapes)}};
}
ModelSpec make_crowder(std::vector<double> lambdas, std::vector<double> shapes, double gamma, double l) {
    return {Family::Crowder, CrowderParams{std::move(lambdas), std::move(shapes), gamma, l}};
}
ModelSpec make_lee2(std::vector<double> lambdas, std::vector<double> shapes, double l) {
    return {Family::LeeII, CrowderParams{std::move(lambdas), std::move(shapes), 0.0, l}};
}
ModelSpec make_lee_ml(double shape, std::vector<double> scales, SubsetRates rates) {
    return {Family::LeeML, LeeParams{shape, std::move(scales), std::move(rates)}};
}
ModelSpec make_lubi(std::vector<double> lambdas, std::vector<double> shapes, double delta, double m) {
    return {Family::LuBI, LuBhattacharyyaParams{std::move(lambdas), std::move(shapes), delta, m}};
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::string indexed(const std::string& name, std::size_t i) { return name + "[" + std::to_string(i + 1) + "]"; }

void require_count(int n) {
    if (n < 1) throw ValidationError("n", "component count must be at least 1");
    if (n > kMaxComponents) {
        throw ValidationError("n", "component count " + std::to_string(n) + " exceeds the supported maximum " +
                                       std::to_string(kMaxComponents));
    }
}

void require_positive(double v, const std::string& path, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(path, std::string(what) + " must be positive and finite");
}

void require_nonnegative(double v, const std::string& path, const char* what) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(path, std::string(what) + " must be nonnegative and finite");
}

void require_positive_vector(const std::vector<double>& v, std::size_t n, const std::string& name, const char* what) {
    if (v.size() != n) {
        throw ValidationError(name, "expected " + std::to_string(n) + " values, got " + std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < n; ++i) require_positive(v[i], indexed(name, i), what);
}

void require_no_interactions(const SubsetRates& r, Family f) {
    for (const auto& [s, rate] : r.entries()) {
        if (subset_size(s) >= 2 && rate != 0.0) {
            throw ValidationError("rates" + format_subset(s),
                                  "interaction term not allowed for " + std::string(family_name(f)));
        }
    }
}

// The independent counterpart keeps only singleton rates, so each must be positive.
void require_singletons(const SubsetRates& r) {
    for (int i = 0; i < r.size(); ++i) {
        if (!(r.at(SubsetMask{1} << i) > 0.0)) {
            throw ValidationError("rates" + format_subset(SubsetMask{1} << i),
                                  "component " + std::to_string(i + 1) +
                                      " has zero singleton rate (independent counterpart undefined)");
        }
    }
}

double max_over(SubsetMask s, const std::vector<double>& v) {
    double m = -INFINITY;
    for (int i = 0; s != 0; ++i, s >>= 1) {
        if (s & 1u) m = std::max(m, v[i]);
    }
    return m;
}

}  // namespace

Model validate_model(ModelSpec spec) {
    const Family fam = spec.family;
    auto wrong_params = [&] {
        return ValidationError("family", "parameter record does not match family " + std::string(family_name(fam)));
    };

    switch (fam) {
        case Family::IndepExp:
        case Family::MOME:
        case Family::MG1: {
            auto* p = std::get_if<ExponentialParams>(&spec.params);
            if (!p) throw wrong_params();
            p->rates.check();
            if (fam == Family::IndepExp) require_no_interactions(p->rates, fam);
            require_singletons(p->rates);
            p->rates = p->rates.canonical();
            const int n = p->rates.size();
            if (fam == Family::MG1) {
                std::vector<double> a(n, 0.0);
                for (const auto& [s, rate] : p->rates.entries()) a[subset_size(s) - 1] += rate;
                return Model(std::move(spec), n, GumbelAggregate{std::move(a)});
            }
            double total = 0.0, indep = 0.0;
            for (const auto& [s, rate] : p->rates.entries()) {
                total += rate;
                if (subset_size(s) == 1) indep += rate;
            }
            return Model(std::move(spec), n, ShockAggregate{total, indep});
        }
        case Family::IndepWeibull:
        case Family::MOMW: {
            auto* p = std::get_if<WeibullShockParams>(&spec.params);
            if (!p) throw wrong_params();
            p->rates.check();
            const int n = p->rates.size();
            require_positive_vector(p->shapes, n, "shapes", "shape");
            if (fam == Family::IndepWeibull) require_no_interactions(p->rates, fam);
            require_singletons(p->rates);
            p->rates = p->rates.canonical();
            PowerHazardAggregate agg;
            for (const auto& [s, rate] : p->rates.entries()) {
                const PowerTerm term{rate, max_over(s, p->shapes)};
                agg.terms.push_back(term);
                if (subset_size(s) == 1) agg.independent_terms.push_back(term);
            }
            return Model(std::move(spec), n, std::move(agg));
        }
        case Family::Crowder:
        case Family::LeeII: {
            auto* p = std::get_if<CrowderParams>(&spec.params);
            if (!p) throw wrong_params();
            const int n = static_cast<int>(p->lambdas.size());
            require_count(n);
            require_positive_vector(p->lambdas, n, "lambdas", "rate");
            require_positive_vector(p->shapes, n, "shapes", "shape");
            require_nonnegative(p->gamma, "gamma", "gamma");
            require_positive(p->l, "l", "l");
            if (fam == Family::LeeII) {
                if (p->gamma != 0.0) throw ValidationError("gamma", "LeeII requires gamma = 0");
                if (p->l > 1.0) throw ValidationError("l", "LeeII requires 0 < l <= 1");
            }
            CrowderParams echo = *p;
            return Model(std::move(spec), n, std::move(echo));
        }
        case Family::LeeML: {
            auto* p = std::get_if<LeeParams>(&spec.params);
            if (!p) throw wrong_params();
            p->rates.check();
            const int n = p->rates.size();
            require_positive(p->shape, "alpha", "shape");
            require_positive_vector(p->scales, n, "c", "scale");
            require_singletons(p->rates);
            p->rates = p->rates.canonical();
            std::vector<double> scaled(n);
            for (int i = 0; i < n; ++i) scaled[i] = std::pow(p->scales[i], p->shape);
            double lambda_l = 0.0, indep = 0.0;
            for (const auto& [s, rate] : p->rates.entries()) {
                const double w = rate * max_over(s, scaled);
                lambda_l += w;
                if (subset_size(s) == 1) indep += w;
            }
            return Model(std::move(spec), n, LeeAggregate{lambda_l, indep});
        }
        case Family::LuBI: {
            auto* p = std::get_if<LuBhattacharyyaParams>(&spec.params);
            if (!p) throw wrong_params();
            const int n = static_cast<int>(p->lambdas.size());
            require_count(n);
            require_positive_vector(p->lambdas, n, "lambdas", "rate");
            require_positive_vector(p->shapes, n, "shapes", "shape");
            require_nonnegative(p->delta, "delta", "delta");
            require_positive(p->m, "m", "m");
            LuBhattacharyyaParams echo = *p;
            return Model(std::move(spec), n, std::move(echo));
        }
    }
    throw ValidationError("family", "unknown family");
}

// ---------------------------------------------------------------------------
// Joint survival
// ---------------------------------------------------------------------------

namespace {

template <class Weight>
double shock_exponent(const SubsetRates& rates, Weight&& weight) {
    double total = 0.0;
    for (const auto& [s, rate] : rates.entries()) {
        double m = 0.0;
        SubsetMask bits = s;
        for (int i = 0; bits != 0; ++i, bits >>= 1) {
            if (bits & 1u) m = std::max(m, weight(i));
        }
        total += rate * m;
    }
    return total;
}

}  // namespace

double joint_sf(const Model& model, std::span<const double> x) {
    const int n = model.size();
    if (static_cast<int>(x.size()) != n) {
        throw DomainError("joint_sf: expected " + std::to_string(n) + " coordinates, got " + std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || x[i] < 0.0) {
            throw DomainError("joint_sf: coordinate x[" + std::to_string(i + 1) + "] must be nonnegative");
        }
    }

    double exponent = 0.0;  // -ln F(x)
    switch (model.family()) {
        case Family::IndepExp:
        case Family::MOME: {
            const auto& r = model.params<ExponentialParams>().rates;
            exponent = shock_exponent(r, [&](int i) { return x[i]; });
            break;
        }
        case Family::MG1: {
            for (const auto& [s, rate] : model.params<ExponentialParams>().rates.entries()) {
                double prod = 1.0;
                SubsetMask bits = s;
                for (int i = 0; bits != 0; ++i, bits >>= 1) {
                    if (bits & 1u) prod *= x[i];
                }
                exponent += rate * prod;
            }
            break;
        }
        case Family::IndepWeibull:
        case Family::MOMW: {
            const auto& p = model.params<WeibullShockParams>();
            exponent = shock_exponent(p.rates, [&](int i) { return std::pow(x[i], p.shapes[i]); });
            break;
        }
        case Family::Crowder:
        case Family::LeeII: {
            const auto& p = model.params<CrowderParams>();
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += p.lambdas[i] * std::pow(x[i], p.shapes[i]);
            exponent = power_excess(p.gamma, s, p.l);
            break;
        }
        case Family::LeeML: {
            const auto& p = model.params<LeeParams>();
            exponent = shock_exponent(p.rates, [&](int i) { return std::pow(p.scales[i] * x[i], p.shape); });
            break;
        }
        case Family::LuBI: {
            const auto& p = model.params<LuBhattacharyyaParams>();
            double s = 0.0, w = 0.0;
            for (int i = 0; i < n; ++i) {
                s += p.lambdas[i] * std::pow(x[i], p.shapes[i]);
                w += std::pow(p.lambdas[i], 1.0 / p.m) * std::pow(x[i], p.shapes[i] / p.m);
            }
            exponent = s + p.delta * std::pow(w, p.m);
            break;
        }
    }
    return clamp_probability(std::exp(-exponent));
}

// ---------------------------------------------------------------------------
// Series system
// ---------------------------------------------------------------------------

namespace {

SeriesState power_state(const std::vector<PowerTerm>& terms, double t) {
    double h_cum = 0.0, h = 0.0;
    for (const auto& term : terms) {
        const double pw = std::pow(t, term.exponent);
        h_cum += term.rate * pw;
        h += term.rate * term.exponent * pw / t;
    }
    return {t, h_cum, h};
}

}  // namespace

SeriesState series_state(const Model& model, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("series metric requires finite t > 0 (got t = " + std::to_string(t) + ")");
    }
    return std::visit(
        [&](const auto& agg) -> SeriesState {
            using A = std::decay_t<decltype(agg)>;
            if constexpr (std::is_same_v<A, ShockAggregate>) {
                return {t, agg.lambda * t, agg.lambda};
            } else if constexpr (std::is_same_v<A, GumbelAggregate>) {
                // theta(t) = sum a_p t^p, Horner for both theta and theta'.
                double theta = 0.0, dtheta = 0.0;
                for (std::size_t p = agg.order_sums.size(); p-- > 0;) {
                    theta = theta * t + agg.order_sums[p];
                    dtheta = dtheta * t + static_cast<double>(p + 1) * agg.order_sums[p];
                }
                return {t, theta * t, dtheta};
            } else if constexpr (std::is_same_v<A, PowerHazardAggregate>) {
                return power_state(agg.terms, t);
            } else if constexpr (std::is_same_v<A, LeeAggregate>) {
                const double alpha = model.params<LeeParams>().shape;
                const double pw = std::pow(t, alpha);
                return {t, agg.lambda_l * pw, alpha * agg.lambda_l * pw / t};
            } else if constexpr (std::is_same_v<A, CrowderParams>) {
                double s = 0.0, ds = 0.0;
                for (std::size_t i = 0; i < agg.lambdas.size(); ++i) {
                    const double pw = std::pow(t, agg.shapes[i]);
                    s += agg.lambdas[i] * pw;
                    ds += agg.lambdas[i] * agg.shapes[i] * pw / t;
                }
                const double cum = power_excess(agg.gamma, s, agg.l);
                const double h = agg.l * std::pow(agg.gamma + s, agg.l - 1.0) * ds;
                return {t, cum, h};
            } else {
                static_assert(std::is_same_v<A, LuBhattacharyyaParams>);
                // -ln F = S + delta W^m, W = sum lambda_i^(1/m) t^(alpha_i/m)
                double s = 0.0, ds = 0.0, w = 0.0, dw_t = 0.0;
                for (std::size_t i = 0; i < agg.lambdas.size(); ++i) {
                    const double pw = std::pow(t, agg.shapes[i]);
                    s += agg.lambdas[i] * pw;
                    ds += agg.lambdas[i] * agg.shapes[i] * pw / t;
                    const double root = std::pow(agg.lambdas[i], 1.0 / agg.m) * std::pow(t, agg.shapes[i] / agg.m);
                    w += root;
                    dw_t += agg.shapes[i] * root;
                }
                const double cum = s + agg.delta * std::pow(w, agg.m);
                const double h = ds + agg.delta * dw_t * std::pow(w, agg.m - 1.0) / t;
                return {t, cum, h};
            }
        },
        model.aggregates());
}

double metric_from_state(const SeriesState& s, Metric metric) {
    switch (metric) {
        case Metric::SF: return clamp_probability(std::exp(-s.cumulative_hazard));
        case Metric::FR: return s.hazard;
        case Metric::RHR:
            if (!(s.cumulative_hazard > 0.0)) {
                throw SingularityError("reversed hazard rate undefined where SF = 1 (t = " + std::to_string(s.t) + ")");
            }
            return s.hazard / std::expm1(s.cumulative_hazard);
        case Metric::AI:
            if (!(s.cumulative_hazard > 0.0)) {
                throw SingularityError("aging intensity undefined where SF = 1 (t = " + std::to_string(s.t) + ")");
            }
            return s.t * s.hazard / s.cumulative_hazard;
    }
    throw DomainError("unknown metric");
}

double series_metric(const Model& model, Metric metric, double t) {
    return metric_from_state(series_state(model, t), metric);
}

// ---------------------------------------------------------------------------
// Independent counterpart
// ---------------------------------------------------------------------------

Model independent_counterpart(const Model& model) {
    switch (model.family()) {
        case Family::IndepExp:
        case Family::IndepWeibull:
            return model;
        case Family::MOME:
        case Family::MG1:
            return validate_model(
                {Family::IndepExp, ExponentialParams{model.params<ExponentialParams>().rates.singletons()}});
        case Family::MOMW: {
            const auto& p = model.params<WeibullShockParams>();
            return validate_model({Family::IndepWeibull, WeibullShockParams{p.rates.singletons(), p.shapes}});
        }
        case Family::Crowder:
        case Family::LeeII: {
            const auto& p = model.params<CrowderParams>();
            return validate_model(make_indep_weibull(p.lambdas, p.shapes));
        }
        case Family::LeeML: {
            const auto& p = model.params<LeeParams>();
            return validate_model({Family::LeeML, LeeParams{p.shape, p.scales, p.rates.singletons()}});
        }
        case Family::LuBI: {
            auto p = model.params<LuBhattacharyyaParams>();
            p.delta = 0.0;
            return validate_model({Family::LuBI, p});
        }
    }
    return model;
}

bool has_dependence(const Model& model) {
    switch (model.family()) {
        case Family::IndepExp:
        case Family::IndepWeibull:
            return false;
        case Family::MOME:
        case Family::MG1:
            return model.params<ExponentialParams>().rates.has_interactions();
        case Family::MOMW:
            return model.params<WeibullShockParams>().rates.has_interactions();
        case Family::LeeML:
            return model.params<LeeParams>().rates.has_interactions();
        case Family::Crowder:
        case Family::LeeII:
            return model.params<CrowderParams>().l != 1.0;
        case Family::LuBI:
            return model.params<LuBhattacharyyaParams>().delta != 0.0;
    }
    return false;
}

}  // namespace deperr
