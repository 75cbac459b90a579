#include "deperr/numeric.hpp"

namespace deperr {

double log_expm1(double x) {
    if (x > 30.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

double expm1_ratio(double a, double b) {
    if (a < 1.0 && b < 1.0) return std::expm1(a) / std::expm1(b);
    return std::exp(log_expm1(a) - log_expm1(b));
}

}  // namespace deperr
