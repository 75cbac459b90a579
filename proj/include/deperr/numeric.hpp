#pragma once

#include <cmath>

namespace deperr {

// ln(e^x - 1) for x > 0 without overflow for large x.
double log_expm1(double x);

// (e^a - 1) / (e^b - 1) for a, b > 0, stable when both are tiny or huge.
double expm1_ratio(double a, double b);

// (gamma + s)^l - gamma^l, without cancellation when s << gamma.
inline double power_excess(double gamma, double s, double l) {
    if (gamma > 0.0) return std::pow(gamma, l) * std::expm1(l * std::log1p(s / gamma));
    return std::pow(s, l);
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
  public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double clamp_probability(double p) noexcept { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace deperr
