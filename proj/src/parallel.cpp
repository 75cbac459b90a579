#include "deperr/parallel.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "deperr/errors.hpp"
#include "deperr/numeric.hpp"

namespace deperr {

namespace {

void require_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("parallel system requires finite t > 0 (got t = " + std::to_string(t) + ")");
    }
}

// Calls fn(mask) for every nonempty subset of {0..n-1}, by size and then
// lexicographically on the sorted index tuple.
template <class Fn>
void for_each_subset_by_size(int n, Fn&& fn) {
    std::vector<int> idx;
    for (int k = 1; k <= n; ++k) {
        idx.resize(k);
        for (int j = 0; j < k; ++j) idx[j] = j;
        while (true) {
            SubsetMask mask = 0;
            for (int j : idx) mask |= SubsetMask{1} << j;
            fn(mask, k);
            int j = k - 1;
            while (j >= 0 && idx[j] == n - k + j) --j;
            if (j < 0) break;
            ++idx[j];
            for (int q = j + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
}

// Alternating sum of exp(-exponent(S)) over all nonempty S.
template <class Exponent>
double alternating_exp_sum(int n, Exponent&& exponent) {
    CompensatedSum sum;
    for_each_subset_by_size(n, [&](SubsetMask s, int k) {
        const double term = std::exp(-exponent(s));
        sum.add(k % 2 == 1 ? term : -term);
    });
    return clamp_probability(sum.value());
}

// zeta[U] = sum over T subset of U of weight[T].
std::vector<double> subset_zeta(std::vector<double> weight, int n) {
    const std::size_t size = std::size_t{1} << n;
    for (int i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t u = 0; u < size; ++u) {
            if (u & bit) weight[u] += weight[u ^ bit];
        }
    }
    return weight;
}

void require_capacity(int n) {
    if (n > kMaxComponents) {
        throw CapacityError("inclusion-exclusion over " + std::to_string(n) + " components exceeds the limit of " +
                            std::to_string(kMaxComponents));
    }
}

}  // namespace

ParallelResult parallel_sf_ie(const Model& model, double t) {
    require_time(t);
    const int n = model.size();
    require_capacity(n);

    std::vector<double> x(n, 0.0);
    CompensatedSum sum;
    std::uint64_t terms = 0;
    for_each_subset_by_size(n, [&](SubsetMask s, int k) {
        for (int i = 0; i < n; ++i) x[i] = (s >> i) & 1u ? t : 0.0;
        const double term = joint_sf(model, x);
        sum.add(k % 2 == 1 ? term : -term);
        ++terms;
    });
    return {t, clamp_probability(sum.value()), parallel_sf_closed(model, t), terms};
}

std::optional<double> parallel_sf_closed(const Model& model, double t) {
    require_time(t);
    const int n = model.size();
    switch (model.family()) {
        case Family::IndepExp: {
            const auto& r = model.params<ExponentialParams>().rates;
            return alternating_exp_sum(n, [&](SubsetMask s) {
                double rate = 0.0;
                for (int i : subset_to_indices(s)) rate += r.at(SubsetMask{1} << (i - 1));
                return t * rate;
            });
        }
        case Family::MOME: {
            // Shock T hits some component of S unless T lies inside the complement.
            const auto& r = model.params<ExponentialParams>().rates;
            std::vector<double> w(std::size_t{1} << n, 0.0);
            double total = 0.0;
            for (const auto& [s, rate] : r.entries()) {
                w[s] += rate;
                total += rate;
            }
            const auto avoid = subset_zeta(std::move(w), n);
            const SubsetMask full = full_mask(n);
            return alternating_exp_sum(n, [&](SubsetMask s) { return t * (total - avoid[full & ~s]); });
        }
        case Family::MG1: {
            // sum_p t^p sum_{T subset of S, |T| = p} lambda_T
            const auto& r = model.params<ExponentialParams>().rates;
            std::vector<double> w(std::size_t{1} << n, 0.0);
            for (const auto& [s, rate] : r.entries()) w[s] += rate * std::pow(t, subset_size(s));
            const auto inside = subset_zeta(std::move(w), n);
            return alternating_exp_sum(n, [&](SubsetMask s) { return inside[s]; });
        }
        default:
            return std::nullopt;
    }
}

double parallel_relative_error(const Model& model, double t) {
    const double dep = parallel_sf_ie(model, t).sf_ie;
    const double ind = parallel_sf_ie(independent_counterpart(model), t).sf_ie;
    if (ind == 0.0) {
        throw DivisionError("independent parallel survival is zero at t = " + std::to_string(t));
    }
    return (dep - ind) / ind;
}

}  // namespace deperr
