#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace deperr {

// Bitmask over components {1..n}: bit (i-1) set means component i is in the subset.
using SubsetMask = std::uint32_t;

inline constexpr int kMaxComponents = 24;

inline int subset_size(SubsetMask s) noexcept { return std::popcount(s); }

inline SubsetMask full_mask(int n) noexcept {
    return n >= 32 ? ~SubsetMask{0} : (SubsetMask{1} << n) - 1;
}

// "{1,3}" style rendering with 1-based indices.
std::string format_subset(SubsetMask s);

// Converts 1-based component indices into a mask. Throws ValidationError on
// out-of-range or repeated indices, or an empty list.
SubsetMask subset_from_indices(const std::vector<int>& one_based, int n);

std::vector<int> subset_to_indices(SubsetMask s);

// Rates lambda_S attached to nonempty subsets of {1..n}. Absent keys mean zero.
// Holds raw values; invariants are enforced by validate_model / check().
class SubsetRates {
  public:
    SubsetRates() = default;
    explicit SubsetRates(int n) : n_(n) {}

    int size() const noexcept { return n_; }

    void set(SubsetMask s, double rate) { rates_[s] = rate; }
    void set(const std::vector<int>& one_based, double rate) {
        rates_[subset_from_indices(one_based, n_)] = rate;
    }
    double at(SubsetMask s) const {
        auto it = rates_.find(s);
        return it == rates_.end() ? 0.0 : it->second;
    }
    bool contains(SubsetMask s) const { return rates_.count(s) != 0; }

    const std::map<SubsetMask, double>& entries() const noexcept { return rates_; }

    // Sum of lambda_S over all S containing component i (0-based).
    double component_total(int i) const;

    // Throws ValidationError naming the first violated invariant; `prefix` is
    // prepended to the parameter path.
    void check(const std::string& prefix = "rates") const;

    // Drops zero entries. Keys are already canonical masks.
    SubsetRates canonical() const;

    // Keeps only singleton keys.
    SubsetRates singletons() const;

    bool has_interactions() const;

    bool operator==(const SubsetRates&) const = default;

  private:
    int n_ = 0;
    std::map<SubsetMask, double> rates_;
};

}  // namespace deperr
