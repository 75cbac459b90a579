#pragma once

#include <cstdint>
#include <optional>

#include "deperr/model.hpp"

namespace deperr {

struct ParallelResult {
    double t;
    double sf_ie;
    std::optional<double> sf_closed;
    std::uint64_t terms_evaluated;
};

// P(max_i X_i > t) by inclusion-exclusion over joint_sf with the absent
// coordinates set to 0. Terms are accumulated with compensated summation in
// |S|-then-lexicographic order.
ParallelResult parallel_sf_ie(const Model& model, double t);

// Compact subset-exponent form for IndepExp, MOME and MG1; absent for the
// other families.
std::optional<double> parallel_sf_closed(const Model& model, double t);

// (P_D - P_I) / P_I for the parallel system, both sides by inclusion-exclusion.
double parallel_relative_error(const Model& model, double t);

}  // namespace deperr
