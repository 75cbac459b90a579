#pragma once

#include <string>
#include <vector>

namespace deperr {

enum class Spacing { Linear, Log };

// Strictly increasing positive evaluation times.
class EvaluationGrid {
  public:
    // Throws DomainError unless start > 0, stop > start and count >= 1. A count
    // of 1 yields {start}.
    static EvaluationGrid make(double start, double stop, int count, Spacing spacing);

    // Throws DomainError unless the points are positive and strictly increasing.
    static EvaluationGrid from_points(std::vector<double> points);

    // 200 log-spaced points over [1e-3, 1e3].
    static EvaluationGrid default_grid();

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

  private:
    explicit EvaluationGrid(std::vector<double> p) : points_(std::move(p)) {}
    std::vector<double> points_;
};

}  // namespace deperr
