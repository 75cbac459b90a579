#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deperr/model.hpp"

namespace deperr {

// Counter-based randomness: the uniform for (draw, slot) depends only on the
// seed, so results do not depend on how draws are split across workers.
struct RngPolicy {
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0 = hardware concurrency
};

// Uniform on (0, 1) keyed by (seed, draw, slot).
double counter_uniform(std::uint64_t seed, std::uint64_t draw, std::uint64_t slot) noexcept;

struct SimEstimate {
    double value;
    double std_error;
    std::uint64_t n_samples;
    std::uint64_t seed;
};

enum class Structure { Series, Parallel };

// Row-major draws: row k holds the lifetimes of draw k.
class LifetimeSample {
  public:
    LifetimeSample(std::size_t draws, int n) : n_(n), values_(draws * static_cast<std::size_t>(n)) {}

    std::size_t draws() const noexcept { return n_ == 0 ? 0 : values_.size() / n_; }
    int components() const noexcept { return n_; }
    double operator()(std::size_t draw, int i) const { return values_[draw * n_ + i]; }
    double& operator()(std::size_t draw, int i) { return values_[draw * n_ + i]; }
    std::vector<double> component(int i) const;

  private:
    int n_;
    std::vector<double> values_;
};

// Fatal-shock construction: E_S ~ Exp(lambda_S) per subset, X_i = min_{S ∋ i} E_S.
LifetimeSample sample_mome(const SubsetRates& rates, std::size_t draw_count, RngPolicy policy);

// X_i = Y_i^(1/alpha_i) with Y from sample_mome.
LifetimeSample sample_momw(const SubsetRates& rates, const std::vector<double>& shapes, std::size_t draw_count,
                           RngPolicy policy);

// X_i = Y_i^(1/alpha) / c_i with Y from sample_mome.
LifetimeSample sample_lee(const LeeParams& params, std::size_t draw_count, RngPolicy policy);

// Indicator average of {min > t} (series) or {max > t} (parallel). Supported for
// IndepExp, MOME, IndepWeibull, MOMW and LeeML; other families throw CapabilityError.
SimEstimate estimate_system_sf(const Model& model, Structure structure, double t, std::size_t draw_count,
                               RngPolicy policy);

bool is_samplable(Family f) noexcept;

inline constexpr double kDefaultFdStep = 1e-4;

// FR, RHR or AI from central differences of the series survival function, with
// one Richardson extrapolation. Step h = max(step * t, 1e-8), capped at t / 2.
double finite_diff_metric(const Model& model, Metric metric, double t, double step = kDefaultFdStep);

}  // namespace deperr
