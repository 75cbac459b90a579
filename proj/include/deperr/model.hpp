#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deperr/subset.hpp"

namespace deperr {

enum class Family { IndepExp, MOME, MG1, IndepWeibull, MOMW, Crowder, LeeII, LeeML, LuBI };

std::string_view family_name(Family f) noexcept;
// Throws ValidationError("family", "unknown family ...") for unrecognised names.
Family parse_family(std::string_view name);

enum class Metric { SF, FR, RHR, AI };

inline constexpr Metric kAllMetrics[] = {Metric::SF, Metric::FR, Metric::RHR, Metric::AI};

std::string_view metric_name(Metric m) noexcept;  // "sf", "fr", "rhr", "ai"
Metric parse_metric(std::string_view name);

// IndepExp, MOME and MG1: all parameters live in the subset rates.
struct ExponentialParams {
    SubsetRates rates;
    bool operator==(const ExponentialParams&) const = default;
};

// IndepWeibull and MOMW. Subset S enters the series hazard as lambda_S * t^max(shape over S).
struct WeibullShockParams {
    SubsetRates rates;
    std::vector<double> shapes;
    bool operator==(const WeibullShockParams&) const = default;
};

// Crowder (and LeeII, the gamma = 0, 0 < l <= 1 member):
//   F(x) = exp{gamma^l - (gamma + sum lambda_i x_i^alpha_i)^l}
struct CrowderParams {
    std::vector<double> lambdas;
    std::vector<double> shapes;
    double gamma = 0.0;
    double l = 1.0;
    bool operator==(const CrowderParams&) const = default;
};

// Lee multivariate model: common shape, per-component scales c_i, shock rates.
struct LeeParams {
    double shape = 1.0;
    std::vector<double> scales;
    SubsetRates rates;
    bool operator==(const LeeParams&) const = default;
};

// Lu-Bhattacharyya I:
//   F(x) = exp{-(sum lambda_i x_i^alpha_i + delta (sum lambda_i^(1/m) x_i^(alpha_i/m))^m)}
struct LuBhattacharyyaParams {
    std::vector<double> lambdas;
    std::vector<double> shapes;
    double delta = 0.0;
    double m = 1.0;
    bool operator==(const LuBhattacharyyaParams&) const = default;
};

using ModelParams =
    std::variant<ExponentialParams, WeibullShockParams, CrowderParams, LeeParams, LuBhattacharyyaParams>;

struct ModelSpec {
    Family family = Family::IndepExp;
    ModelParams params;
    bool operator==(const ModelSpec&) const = default;
};

// Convenience constructors used throughout tests and the config reader.
ModelSpec make_indep_exp(const std::vector<double>& lambdas);
ModelSpec make_mome(SubsetRates rates);
ModelSpec make_mg1(SubsetRates rates);
ModelSpec make_indep_weibull(const std::vector<double>& lambdas, std::vector<double> shapes);
ModelSpec make_momw(SubsetRates rates, std::vector<double> shapes);
ModelSpec make_crowder(std::vector<double> lambdas, std::vector<double> shapes, double gamma, double l);
ModelSpec make_lee2(std::vector<double> lambdas, std::vector<double> shapes, double l);
ModelSpec make_lee_ml(double shape, std::vector<double> scales, SubsetRates rates);
ModelSpec make_lubi(std::vector<double> lambdas, std::vector<double> shapes, double delta, double m);

// A term rate * t^exponent of a power-law cumulative hazard.
struct PowerTerm {
    double rate;
    double exponent;
    bool operator==(const PowerTerm&) const = default;
};

// Derived constants per family.
struct ShockAggregate {  // IndepExp, MOME
    double lambda;              // sum of all lambda_S
    double independent_lambda;  // sum of singleton rates
};
struct GumbelAggregate {  // MG1
    std::vector<double> order_sums;  // a_1..a_n, a_p = sum over |S| = p
};
struct PowerHazardAggregate {  // IndepWeibull, MOMW: A(t) = sum rate * t^exponent
    std::vector<PowerTerm> terms;
    std::vector<PowerTerm> independent_terms;
};
struct LeeAggregate {  // LeeML
    double lambda_l;
    double independent_lambda;  // sum lambda_i c_i^alpha
};

using AggregateRecord =
    std::variant<ShockAggregate, GumbelAggregate, PowerHazardAggregate, LeeAggregate, CrowderParams,
                 LuBhattacharyyaParams>;

// Validated, immutable model. Construct through validate_model().
class Model {
  public:
    const ModelSpec& spec() const noexcept { return spec_; }
    Family family() const noexcept { return spec_.family; }
    int size() const noexcept { return n_; }
    const AggregateRecord& aggregates() const noexcept { return aggregates_; }

    template <class P>
    const P& params() const {
        return std::get<P>(spec_.params);
    }

    bool operator==(const Model& other) const { return spec_ == other.spec_; }

  private:
    friend Model validate_model(ModelSpec spec);
    Model(ModelSpec spec, int n, AggregateRecord agg)
        : spec_(std::move(spec)), n_(n), aggregates_(std::move(agg)) {}

    ModelSpec spec_;
    int n_;
    AggregateRecord aggregates_;
};

// Checks every invariant of the family and canonicalises subset keys. Throws
// ValidationError with the offending parameter path.
Model validate_model(ModelSpec spec);

// Joint survival P(X_1 > x_1, ..., X_n > x_n). Throws DomainError on a negative
// or wrong-length coordinate vector.
double joint_sf(const Model& model, std::span<const double> x);

// Cumulative hazard -ln SF and hazard of the series lifetime min_i X_i.
struct SeriesState {
    double t;
    double cumulative_hazard;
    double hazard;
};

SeriesState series_state(const Model& model, double t);

// SF, FR, RHR or AI of the series system at t > 0.
double series_metric(const Model& model, Metric metric, double t);

// Metric from a precomputed state.
double metric_from_state(const SeriesState& s, Metric metric);

// ln SF of the series system, accurate where SF is close to 1 or underflows.
inline double series_log_sf(const Model& model, double t) { return -series_state(model, t).cumulative_hazard; }

// Strips every dependence term: MOME/MG1 -> IndepExp, MOMW -> IndepWeibull,
// Crowder/LeeII -> IndepWeibull, LeeML -> LeeML without interactions,
// LuBI -> LuBI with delta = 0. Idempotent.
Model independent_counterpart(const Model& model);

inline const AggregateRecord& aggregates(const Model& model) { return model.aggregates(); }

bool has_dependence(const Model& model);

}  // namespace deperr
