#include "deperr/grid.hpp"

#include <cmath>
#include <string>

#include "deperr/errors.hpp"

namespace deperr {

EvaluationGrid EvaluationGrid::make(double start, double stop, int count, Spacing spacing) {
    if (!(start > 0.0) || !std::isfinite(start)) throw DomainError("grid start must be positive");
    if (!(stop > start) || !std::isfinite(stop)) throw DomainError("grid stop must exceed start");
    if (count < 1) throw DomainError("grid count must be at least 1");
    std::vector<double> pts(count);
    if (count == 1) {
        pts[0] = start;
        return EvaluationGrid(std::move(pts));
    }
    const double denom = static_cast<double>(count - 1);
    if (spacing == Spacing::Linear) {
        for (int k = 0; k < count; ++k) pts[k] = start + (stop - start) * (k / denom);
    } else {
        const double lo = std::log(start), hi = std::log(stop);
        for (int k = 0; k < count; ++k) pts[k] = std::exp(lo + (hi - lo) * (k / denom));
    }
    pts.front() = start;
    pts.back() = stop;
    return from_points(std::move(pts));
}

EvaluationGrid EvaluationGrid::from_points(std::vector<double> points) {
    if (points.empty()) throw DomainError("evaluation grid is empty");
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!(points[k] > 0.0) || !std::isfinite(points[k])) {
            throw DomainError("grid point " + std::to_string(k) + " is not a positive finite time");
        }
        if (k > 0 && !(points[k] > points[k - 1])) {
            throw DomainError("grid points must be strictly increasing (index " + std::to_string(k) + ")");
        }
    }
    return EvaluationGrid(std::move(points));
}

EvaluationGrid EvaluationGrid::default_grid() { return make(1e-3, 1e3, 200, Spacing::Log); }

}  // namespace deperr
