// dep-err: reliability metrics and independence-assumption errors for
// series/parallel systems with dependent components.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "deperr/config.hpp"
#include "deperr/errors.hpp"
#include "deperr/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Relative errors from assuming independent component lifetimes", "dep-err"};

    std::string command;
    std::string model_path;
    std::optional<std::string> metric, grid, structure, output;
    std::optional<std::uint64_t> samples, seed;

    app.add_option("command", command, "eval | errors | classify | parallel | simulate")->required();
    app.add_option("--model", model_path, "model configuration (JSON)")->required();
    app.add_option("--metric", metric, "sf | fr | rhr | ai");
    app.add_option("--grid", grid, "START:STOP:COUNT:lin|log");
    app.add_option("--samples", samples, "Monte Carlo draws per grid point (simulate)");
    app.add_option("--seed", seed, "64-bit seed (simulate)");
    app.add_option("--structure", structure, "series | parallel (simulate)");
    app.add_option("--output", output, "CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : deperr::kExitConfig;
    }

    try {
        deperr::RunConfig cfg = deperr::parse_config(model_path);
        cfg.command = deperr::parse_command(command);
        if (metric) cfg.metric = deperr::parse_metric(*metric);
        if (grid) cfg.grid = deperr::parse_grid(*grid);
        if (samples) cfg.samples = *samples;
        if (seed) cfg.seed = *seed;
        if (structure) {
            if (*structure == "series") {
                cfg.structure = deperr::Structure::Series;
            } else if (*structure == "parallel") {
                cfg.structure = deperr::Structure::Parallel;
            } else {
                throw deperr::ValidationError("structure", "structure must be series or parallel");
            }
        }
        if (output) cfg.output = *output;
        cfg.check();
        return deperr::run(cfg, std::cerr);
    } catch (...) {
        return deperr::report_current_exception(std::cerr);
    }
}
