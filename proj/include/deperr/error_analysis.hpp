#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "deperr/grid.hpp"
#include "deperr/model.hpp"

namespace deperr {

// (metric_D(t) - metric_I(t)) / metric_I(t), where I is independent_counterpart(model).
// SF and RHR ratios are formed in log space so the result stays finite after
// both survival values underflow.
double relative_error(const Model& model, Metric metric, double t);

// Family-specific closed form of the same relative error, when one exists:
// MOME/IndepExp (all four), MG1 (all four), MOMW/IndepWeibull (SF, FR),
// Crowder/LeeII (all four), LeeML (all four). Absent otherwise.
std::optional<double> closed_form_error(const Model& model, Metric metric, double t);

// g(x) = (gamma/beta) (e^{beta x} - 1)/(e^{gamma x} - 1) - 1.
// Increasing in x for beta > gamma, decreasing for beta < gamma, g(0+) = 0.
double lemma_g(double beta, double gamma, double x);

// h(x) = g(x^alpha).
double lemma_h(double beta, double gamma, double alpha, double x);

enum class Trend { Increasing, Decreasing, Neither };
enum class AverageClass { IFRA, DFRA, Neither };

std::string_view trend_name(Trend t, std::string_view inc, std::string_view dec) noexcept;
std::string_view average_class_name(AverageClass c) noexcept;

struct AgingClass {
    Trend fr = Trend::Neither;       // IFR / DFR
    AverageClass fra = AverageClass::Neither;
    Trend ai = Trend::Neither;       // IAI / DAI
    bool fr_constant = false;        // FR flat within tolerance (both IFR and DFR)
    bool ai_constant = false;
    bool exponential = false;        // |AI - 1| <= 1e-10 everywhere
    double ai_min = 0.0;
    double ai_max = 0.0;
    std::vector<double> evidence_grid;
    std::vector<double> fr_values;
    std::vector<double> fr_average;  // (1/t) * integral of FR = cumulative hazard / t
    std::vector<double> ai_values;
};

inline constexpr double kMonotoneTolerance = 1e-9;
inline constexpr double kExponentialTolerance = 1e-10;

// Needs at least 3 grid points; throws DomainError otherwise. Constant FR is
// reported as Trend::Neither with fr_constant set. IFRA/DFRA is read off the AI
// function (AI >= 1 <=> IFRA); AI identically 1 is reported as IFRA.
AgingClass classify_aging(const Model& model, const EvaluationGrid& grid);

struct ErrorPoint {
    double t;
    double dep;
    double indep;
    std::optional<double> rel_err;  // absent where indep == 0
};

struct ErrorCurve {
    Metric metric;
    std::vector<ErrorPoint> points;
};

ErrorCurve error_curve(const Model& model, Metric metric, const EvaluationGrid& grid);

}  // namespace deperr
