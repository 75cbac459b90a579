#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "deperr/grid.hpp"
#include "deperr/model.hpp"
#include "deperr/simulation.hpp"

namespace deperr {

enum class Command { Eval, Errors, Classify, Parallel, Simulate };

std::string_view command_name(Command c) noexcept;
Command parse_command(std::string_view name);

struct GridSpec {
    double start = 1e-3;
    double stop = 1e3;
    int count = 200;
    Spacing spacing = Spacing::Log;

    EvaluationGrid build() const { return EvaluationGrid::make(start, stop, count, spacing); }
    bool operator==(const GridSpec&) const = default;
};

// Parses "START:STOP:COUNT:lin|log". Throws ValidationError.
GridSpec parse_grid(std::string_view text);

struct RunConfig {
    explicit RunConfig(Model m) : model(std::move(m)) {}

    Model model;
    Command command = Command::Eval;
    GridSpec grid;
    std::optional<Metric> metric;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    Structure structure = Structure::Series;
    std::string output;

    // Throws ValidationError for cross-field violations (grid bounds, samples
    // required by simulate).
    void check() const;

    bool operator==(const RunConfig&) const = default;
};

// Reads a JSON document. Unknown keys are rejected. Throws IoError when the
// file cannot be read and ValidationError (with a path such as
// "rates[1].lambda") for everything else.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text);

// Canonical JSON rendering; parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace deperr
