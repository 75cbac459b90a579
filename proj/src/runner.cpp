#include "deperr/runner.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "deperr/error_analysis.hpp"
#include "deperr/errors.hpp"
#include "deperr/parallel.hpp"
#include "deperr/simulation.hpp"

namespace deperr {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

class CsvWriter {
  public:
    explicit CsvWriter(std::initializer_list<std::string_view> header) {
        for (auto h : header) cell(h);
        end_row();
    }

    CsvWriter& cell(std::string_view s) {
        if (!first_) out_ += ',';
        out_ += s;
        first_ = false;
        return *this;
    }
    CsvWriter& cell(double v) { return cell(format_number(v)); }
    CsvWriter& cell(const std::optional<double>& v) { return v ? cell(*v) : cell(std::string_view{}); }
    CsvWriter& cell(std::uint64_t v) { return cell(std::string_view(std::to_string(v))); }
    CsvWriter& cell(bool b) { return cell(std::string_view(b ? "true" : "false")); }

    void end_row() {
        out_ += '\n';
        first_ = true;
    }
    std::string str() && { return std::move(out_); }

  private:
    std::string out_;
    bool first_ = true;
};

std::string eval_table(const RunConfig& cfg, const EvaluationGrid& grid) {
    CsvWriter csv{"t", "sf", "fr", "rhr", "ai"};
    for (double t : grid) {
        const SeriesState s = series_state(cfg.model, t);
        csv.cell(t);
        for (Metric m : kAllMetrics) csv.cell(metric_from_state(s, m));
        csv.end_row();
    }
    return std::move(csv).str();
}

std::string errors_table(const RunConfig& cfg, const EvaluationGrid& grid) {
    CsvWriter csv{"t", "metric", "dep", "indep", "rel_err", "closed_form_err"};
    std::vector<Metric> metrics;
    if (cfg.metric) {
        metrics.push_back(*cfg.metric);
    } else {
        metrics.assign(std::begin(kAllMetrics), std::end(kAllMetrics));
    }
    for (Metric m : metrics) {
        const ErrorCurve curve = error_curve(cfg.model, m, grid);
        for (const ErrorPoint& p : curve.points) {
            csv.cell(p.t).cell(metric_name(m)).cell(p.dep).cell(p.indep).cell(p.rel_err);
            csv.cell(closed_form_error(cfg.model, m, p.t));
            csv.end_row();
        }
    }
    return std::move(csv).str();
}

std::string classify_table(const RunConfig& cfg, const EvaluationGrid& grid) {
    const AgingClass c = classify_aging(cfg.model, grid);
    CsvWriter csv{"frclass", "fraclass", "aiclass", "fr_constant", "ai_constant", "exponential", "ai_min", "ai_max",
                  "grid_points"};
    csv.cell(trend_name(c.fr, "IFR", "DFR"))
        .cell(average_class_name(c.fra))
        .cell(trend_name(c.ai, "IAI", "DAI"))
        .cell(c.fr_constant)
        .cell(c.ai_constant)
        .cell(c.exponential)
        .cell(c.ai_min)
        .cell(c.ai_max)
        .cell(static_cast<std::uint64_t>(grid.size()));
    csv.end_row();
    return std::move(csv).str();
}

std::string parallel_table(const RunConfig& cfg, const EvaluationGrid& grid) {
    CsvWriter csv{"t", "sf_ie", "sf_closed", "rel_err"};
    const Model indep = independent_counterpart(cfg.model);
    for (double t : grid) {
        const ParallelResult r = parallel_sf_ie(cfg.model, t);
        const double ind = parallel_sf_ie(indep, t).sf_ie;
        std::optional<double> rel;
        if (ind != 0.0) rel = (r.sf_ie - ind) / ind;
        csv.cell(t).cell(r.sf_ie).cell(r.sf_closed).cell(rel);
        csv.end_row();
    }
    return std::move(csv).str();
}

std::string simulate_table(const RunConfig& cfg, const EvaluationGrid& grid) {
    CsvWriter csv{"t", "estimate", "stderr", "n", "analytic"};
    const RngPolicy policy{cfg.seed.value_or(kDefaultSeed), 0};
    std::vector<double> diag(cfg.model.size());
    for (double t : grid) {
        const SimEstimate est = estimate_system_sf(cfg.model, cfg.structure, t, *cfg.samples, policy);
        double analytic;
        if (cfg.structure == Structure::Series) {
            std::fill(diag.begin(), diag.end(), t);
            analytic = joint_sf(cfg.model, diag);
        } else {
            analytic = parallel_sf_ie(cfg.model, t).sf_ie;
        }
        csv.cell(t).cell(est.value).cell(est.std_error).cell(est.n_samples).cell(analytic);
        csv.end_row();
    }
    return std::move(csv).str();
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::string render_csv(const RunConfig& config) {
    config.check();
    const EvaluationGrid grid = config.grid.build();
    switch (config.command) {
        case Command::Eval: return eval_table(config, grid);
        case Command::Errors: return errors_table(config, grid);
        case Command::Classify: return classify_table(config, grid);
        case Command::Parallel: return parallel_table(config, grid);
        case Command::Simulate: return simulate_table(config, grid);
    }
    throw ValidationError("command", "unknown command");
}

int report_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const CapabilityError& e) {
        err << "capability error: " << e.what() << '\n';
        return kExitCapability;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

int run(const RunConfig& config, std::ostream& err) {
    try {
        if (config.output.empty()) throw ValidationError("output", "no output file given");
        const std::string table = render_csv(config);

        // Write beside the target and rename so a failed write leaves no partial CSV.
        const std::filesystem::path target(config.output);
        std::filesystem::path tmp = target;
        tmp += ".partial";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
            out.write(table.data(), static_cast<std::streamsize>(table.size()));
            out.flush();
            if (!out) {
                out.close();
                std::filesystem::remove(tmp);
                throw IoError("failed writing " + tmp.string());
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, target, ec);
        if (ec) {
            std::filesystem::remove(tmp);
            throw IoError("cannot move output into place at " + target.string() + ": " + ec.message());
        }
        return kExitOk;
    } catch (...) {
        return report_current_exception(err);
    }
}

}  // namespace deperr
