// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deperr/error_analysis.hpp"
#include "deperr/errors.hpp"
#include "deperr/parallel.hpp"
#include "deperr/runner.hpp"
#include "deperr/simulation.hpp"
#include "test_support.hpp"

using namespace deperr;
using namespace deperr::testing;

namespace {

struct Tally {
    long checks = 0;
    long failures = 0;
    double worst = 0.0;
    std::string first_failure;

    void record(bool ok, double deviation, const std::string& where) {
        ++checks;
        if (std::isfinite(deviation)) worst = std::max(worst, deviation);
        if (!ok) {
            if (failures == 0) first_failure = where;
            ++failures;
        }
    }
};

std::string describe(const Model& m, double t, std::string_view what) {
    std::ostringstream os;
    os << family_name(m.family()) << " n=" << m.size() << " t=" << t << " " << what;
    return os.str();
}

// |a - b| <= tol * max(|a|, |b|, floor); identical values (including
// matching infinities) agree. The floor keeps exact zeros comparable with
// quantities formed as ratio - 1, which carry rounding of order 1e-16.
bool rel_close(double a, double b, double tol, double* deviation, double floor = 0.0) {
    if (a == b) {
        *deviation = 0.0;
        return true;
    }
    *deviation = std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
    return *deviation <= tol;
}

std::vector<double> grid_points(const EvaluationGrid& g) { return {g.begin(), g.end()}; }

// Steps that go the wrong way by more than tol * max(1, |v|).
int monotone_violations(const std::vector<double>& v, bool increasing, double tol) {
    int bad = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double step = increasing ? v[k] - v[k - 1] : v[k - 1] - v[k];
        if (step < -tol * std::max(1.0, std::fabs(v[k - 1]))) ++bad;
    }
    return bad;
}

// ---------------------------------------------------------------------------

Tally closed_form_equivalence() {
    Tally tally;
    std::mt19937_64 rng(1001);
    const auto grid = log_grid(1e-2, 1e2, 20);
    for (Family f : kAllFamilies) {
        for (int draw = 0; draw < 200; ++draw) {
            const Model m = random_model(f, rng, 2 + draw % 3);
            for (double t : grid) {
                for (Metric k : kAllMetrics) {
                    const auto cf = closed_form_error(m, k, t);
                    if (!cf) continue;
                    double dev = 0.0;
                    const bool ok = rel_close(*cf, relative_error(m, k, t), 1e-8, &dev, 1e-6);
                    tally.record(ok, dev, describe(m, t, metric_name(k)));
                }
            }
        }
    }
    return tally;
}

Tally metric_consistency() {
    Tally tally;
    std::mt19937_64 rng(1002);
    const auto grid = log_grid(1e-2, 1e2, 20);
    for (Family f : kAllFamilies) {
        for (int draw = 0; draw < 50; ++draw) {
            const Model m = random_model(f, rng, 2 + draw % 3);
            for (double t : grid) {
                const SeriesState s = series_state(m, t);
                const double fd = finite_diff_metric(m, Metric::FR, t);
                const double fd_dev = std::fabs(fd - s.hazard) / std::fabs(s.hazard);
                tally.record(fd_dev <= 1e-5, fd_dev, describe(m, t, "fr vs finite difference"));

                const double ai = series_metric(m, Metric::AI, t);
                const double lhs = ai * s.cumulative_hazard;
                const double rhs = t * series_metric(m, Metric::FR, t);
                const double id_dev = std::fabs(lhs - rhs) / std::fabs(rhs);
                tally.record(id_dev <= 1e-10, id_dev, describe(m, t, "ai identity"));
            }
        }
    }
    return tally;
}

Tally sign_and_monotonicity() {
    constexpr double tol = 1e-9;
    Tally tally;
    std::mt19937_64 rng(1003);
    const auto grid = grid_points(EvaluationGrid::default_grid());

    auto curve = [&](const Model& m, Metric k) {
        std::vector<double> v;
        for (double t : grid) v.push_back(closed_form_error(m, k, t).value());
        return v;
    };
    auto all_within = [&](const std::vector<double>& v, double lo, double hi) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x >= lo - tol && x <= hi + tol; });
    };

    for (int draw = 0; draw < 50; ++draw) {
        const int n = 2 + draw % 3;

        const Model mome = random_model(Family::MOME, rng, n);
        const auto rhr = curve(mome, Metric::RHR);
        tally.record(all_within(rhr, -INFINITY, 0.0), 0.0, describe(mome, 0, "rhr error sign"));
        tally.record(monotone_violations(rhr, false, tol) == 0, 0.0, describe(mome, 0, "rhr error monotone"));
        const auto sf = curve(mome, Metric::SF);
        tally.record(all_within(sf, -1.0, 0.0), 0.0, describe(mome, 0, "sf error range"));
        tally.record(monotone_violations(sf, false, tol) == 0, 0.0, describe(mome, 0, "sf error monotone"));

        const Model mg1 = random_model(Family::MG1, rng, n);
        const auto fr = curve(mg1, Metric::FR);
        tally.record(all_within(fr, 0.0, INFINITY), 0.0, describe(mg1, 0, "fr error sign"));
        tally.record(monotone_violations(fr, true, tol) == 0, 0.0, describe(mg1, 0, "fr error monotone"));
        tally.record(all_within(curve(mg1, Metric::AI), 0.0, n - 1.0), 0.0, describe(mg1, 0, "ai error range"));

        const Model lee = random_model(Family::LeeML, rng, n);
        tally.record(all_within(curve(lee, Metric::AI), 0.0, 0.0), 0.0, describe(lee, 0, "ai error zero"));
    }

    for (int draw = 0; draw < 200; ++draw) {
        const double beta = uniform(rng, 0.1, 4.0), gamma = uniform(rng, 0.1, 4.0), alpha = uniform(rng, 0.2, 3.0);
        if (beta == gamma) continue;
        std::vector<double> g, h;
        for (double x : grid) {
            g.push_back(lemma_g(beta, gamma, x));
            h.push_back(lemma_h(beta, gamma, alpha, x));
        }
        const bool up = beta > gamma;
        std::ostringstream where;
        where << "lemma beta=" << beta << " gamma=" << gamma << " alpha=" << alpha;
        tally.record(monotone_violations(g, up, tol) == 0, 0.0, where.str() + " g");
        tally.record(monotone_violations(h, up, tol) == 0, 0.0, where.str() + " h");
        tally.record(all_within(g, up ? 0.0 : -1.0, up ? INFINITY : 0.0), 0.0, where.str() + " g sign");
    }
    return tally;
}

Tally aging_classification() {
    Tally tally;
    std::mt19937_64 rng(1004);
    const auto grid = EvaluationGrid::default_grid();
    for (int draw = 0; draw < 50; ++draw) {
        const int n = 2 + draw % 3;
        const Model mg1 = random_model(Family::MG1, rng, n);
        tally.record(classify_aging(mg1, grid).fra == AverageClass::IFRA, 0.0, describe(mg1, 0, "IFRA"));

        const Model mome = random_model(Family::MOME, rng, n);
        const AgingClass mc = classify_aging(mome, grid);
        const double dev = std::max(std::fabs(mc.ai_min - 1.0), std::fabs(mc.ai_max - 1.0));
        tally.record(mc.exponential && dev <= 1e-10, dev, describe(mome, 0, "exponential"));

        const Model low = validate_model(make_indep_weibull(random_vector(rng, n, 0.2, 2.0), random_vector(rng, n, 0.1, 0.99)));
        tally.record(classify_aging(low, grid).fra == AverageClass::DFRA, 0.0, describe(low, 0, "DFRA"));

        const Model high = validate_model(make_indep_weibull(random_vector(rng, n, 0.2, 2.0), random_vector(rng, n, 1.01, 4.0)));
        tally.record(classify_aging(high, grid).fra == AverageClass::IFRA, 0.0, describe(high, 0, "IFRA"));
    }
    return tally;
}

Tally inclusion_exclusion() {
    Tally tally;
    std::mt19937_64 rng(1005);
    const auto grid = log_grid(1e-2, 1e1, 5);
    for (Family f : {Family::IndepExp, Family::MOME, Family::MG1}) {
        for (int n = 2; n <= 6; ++n) {
            for (int draw = 0; draw < 100; ++draw) {
                const Model m = random_model(f, rng, n);
                for (double t : grid) {
                    const ParallelResult r = parallel_sf_ie(m, t);
                    const double dev = std::fabs(r.sf_ie - parallel_sf_closed(m, t).value());
                    tally.record(dev <= 1e-10, dev, describe(m, t, "parallel"));
                }
            }
        }
    }
    return tally;
}

// Time at which the series survival falls to p, by bisection on the diagonal.
double series_quantile(const Model& m, double p) {
    double lo = 0.0, hi = 1.0;
    while (diagonal_sf(m, hi) > p) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diagonal_sf(m, mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Tally monte_carlo() {
    constexpr std::size_t draws = 1'000'000;
    Tally tally;
    std::mt19937_64 rng(1006);
    for (Family f : {Family::MOME, Family::MOMW, Family::LeeML}) {
        const Model m = random_model(f, rng, 3);
        std::vector<double> grid;
        for (double p : {0.8, 0.65, 0.5, 0.35, 0.2}) grid.push_back(series_quantile(m, p));
        if (f == Family::MOMW) grid.push_back(std::max(1.0, grid.back()));
        for (double t : grid) {
            for (Structure s : {Structure::Series, Structure::Parallel}) {
                const RngPolicy policy{.seed = 20240601};
                const SimEstimate est = estimate_system_sf(m, s, t, draws, policy);
                const double exact = s == Structure::Series ? diagonal_sf(m, t) : parallel_sf_ie(m, t).sf_ie;
                const double z = std::fabs(est.value - exact) / est.std_error;
                const char* label = s == Structure::Series ? "series" : "parallel";
                tally.record(est.std_error > 0.0 && z <= 3.5, z, describe(m, t, label));

                if (s == Structure::Series && t >= 1.0) {
                    // the printed series survival agrees with the sampled law from t = 1 on
                    const double printed = series_metric(m, Metric::SF, t);
                    const double zp = std::fabs(est.value - printed) / est.std_error;
                    tally.record(zp <= 3.5, zp, describe(m, t, "series closed form"));
                }

                const SimEstimate again = estimate_system_sf(m, s, t, draws, {.seed = policy.seed, .workers = 3});
                tally.record(again.value == est.value && again.std_error == est.std_error, 0.0,
                             describe(m, t, "rerun bit-identical"));
            }
        }
    }
    return tally;
}

Tally degenerate_limits() {
    Tally tally;
    std::mt19937_64 rng(1007);
    const auto grid = log_grid(1e-2, 1e2, 20);

    for (Family f : kAllFamilies) {
        for (int draw = 0; draw < 20; ++draw) {
            const Model ind = independent_counterpart(random_model(f, rng, 2 + draw % 3));
            for (double t : grid) {
                for (Metric k : kAllMetrics) {
                    const double e = relative_error(ind, k, t);
                    tally.record(e == 0.0, std::fabs(e), describe(ind, t, metric_name(k)));
                }
            }
        }
    }

    auto compare = [&](const Model& a, const Model& b, std::string_view what) {
        for (double t : grid) {
            for (Metric k : kAllMetrics) {
                double dev = 0.0;
                const bool ok = rel_close(series_metric(a, k, t), series_metric(b, k, t), 1e-12, &dev);
                tally.record(ok, dev, describe(a, t, std::string(what) + " " + std::string(metric_name(k))));
            }
        }
    };

    for (int draw = 0; draw < 30; ++draw) {
        const int n = 2 + draw % 3;
        const auto lambdas = random_vector(rng, n, 0.2, 2.0);
        const auto shapes = random_vector(rng, n, 0.3, 3.0);
        const Model crowder = validate_model(make_crowder(lambdas, shapes, 0.0, 1.0));
        const Model weibull = validate_model(make_indep_weibull(lambdas, shapes));
        compare(crowder, weibull, "crowder vs weibull");
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> x(n);
            for (double& v : x) v = uniform(rng, 0.0, 3.0);
            double dev = 0.0;
            tally.record(rel_close(joint_sf(crowder, x), joint_sf(weibull, x), 1e-12, &dev), dev,
                         describe(crowder, x[0], "joint sf"));
        }

        const SubsetRates rates = random_rates(rng, n);
        const Model lee = validate_model(make_lee_ml(1.0, std::vector<double>(n, 1.0), rates));
        const Model mome = validate_model(make_mome(rates));
        compare(lee, mome, "leeml vs mome");
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> x(n);
            for (double& v : x) v = uniform(rng, 0.0, 3.0);
            double dev = 0.0;
            tally.record(rel_close(joint_sf(lee, x), joint_sf(mome, x), 1e-12, &dev), dev, describe(lee, x[0], "joint sf"));
        }
    }
    return tally;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Tally cli_round_trip() {
    Tally tally;
    const std::filesystem::path data = DEPERR_TEST_DATA_DIR;
    const std::filesystem::path golden = DEPERR_TEST_GOLDEN_DIR;
    const auto work = std::filesystem::temp_directory_path() / "deperr_acceptance";
    std::filesystem::create_directories(work);

    for (const char* name : {"mome_eval", "mg1_errors", "weibull_classify", "indep_parallel", "lee_simulate"}) {
        RunConfig config = parse_config(data / (std::string(name) + ".json"));
        config.check();
        const std::string expected = slurp(golden / (std::string(name) + ".csv"));
        for (int pass = 0; pass < 2; ++pass) {
            config.output = (work / (std::string(name) + std::to_string(pass) + ".csv")).string();
            std::ostringstream err;
            const int code = run(config, err);
            const bool ok = code == kExitOk && slurp(config.output) == expected;
            tally.record(ok, 0.0, std::string(name) + " pass " + std::to_string(pass) + " " + err.str());
        }
        tally.record(render_csv(config) == expected, 0.0, std::string(name) + " render_csv");
    }
    return tally;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        std::function<Tally()> body;
    };
    const Criterion criteria[] = {
        {"AC1", "closed-form vs generic relative error (1e-8)", closed_form_equivalence},
        {"AC2", "finite-difference hazard (1e-5) and aging-intensity identity (1e-10)", metric_consistency},
        {"AC3", "sign and monotonicity of error curves and lemma functions (1e-9)", sign_and_monotonicity},
        {"AC4", "aging classification of MG1, MOME and independent Weibull", aging_classification},
        {"AC5", "inclusion-exclusion vs compact parallel forms (1e-10)", inclusion_exclusion},
        {"AC6", "Monte Carlo within 3.5 standard errors, bit-identical reruns", monte_carlo},
        {"AC7", "degenerate limits (1e-12)", degenerate_limits},
        {"AC8", "CLI golden CSVs byte-exact across two runs", cli_round_trip},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Tally tally;
        std::string crash;
        try {
            tally = c.body();
        } catch (const std::exception& e) {
            crash = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = crash.empty() && tally.failures == 0 && tally.checks > 0;
        failed += !ok;
        std::printf("%s %s: %s | checks=%ld failures=%ld worst=%.3g time=%.2fs", ok ? "PASS" : "FAIL", c.id, c.title,
                    tally.checks, tally.failures, tally.worst, secs);
        if (!crash.empty()) std::printf(" | exception: %s", crash.c_str());
        if (tally.failures > 0) std::printf(" | first failure: %s", tally.first_failure.c_str());
        std::printf("\n");
    }
    return failed == 0 ? 0 : 1;
}
