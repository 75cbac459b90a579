#include "deperr/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "deperr/errors.hpp"

namespace deperr {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Eval, "eval"},         {Command::Errors, "errors"},     {Command::Classify, "classify"},
    {Command::Parallel, "parallel"}, {Command::Simulate, "simulate"},
};

const std::set<std::string> kTopLevelKeys = {"family", "n",       "rates",  "shapes", "gamma",  "l",
                                             "alpha",  "c",       "delta",  "m",      "grid",   "command",
                                             "metric", "samples", "seed",   "structure", "output"};

const std::set<std::string> kModelKeys = {"n", "rates", "shapes", "gamma", "l", "alpha", "c", "delta", "m"};

// Model keys each family accepts; "n" and "rates" are required everywhere.
std::set<std::string> family_keys(Family f) {
    switch (f) {
        case Family::IndepExp:
        case Family::MOME:
        case Family::MG1: return {"n", "rates"};
        case Family::IndepWeibull:
        case Family::MOMW: return {"n", "rates", "shapes"};
        case Family::Crowder: return {"n", "rates", "shapes", "gamma", "l"};
        case Family::LeeII: return {"n", "rates", "shapes", "gamma", "l"};
        case Family::LeeML: return {"n", "rates", "alpha", "c"};
        case Family::LuBI: return {"n", "rates", "shapes", "delta", "m"};
    }
    return {};
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "expected a number");
    return v.get<double>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw ValidationError(path, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string string_of(const json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

SubsetRates parse_rates(const json& v, int n) {
    if (!v.is_array()) throw ValidationError("rates", "expected an array of {subset, lambda} objects");
    SubsetRates rates(n);
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string path = "rates[" + std::to_string(k) + "]";
        const json& entry = v[k];
        if (!entry.is_object()) throw ValidationError(path, "expected an object");
        for (const auto& item : entry.items()) {
            if (item.key() != "subset" && item.key() != "lambda") {
                throw ValidationError(path + "." + item.key(), "unknown key");
            }
        }
        const json& subset = require(entry, "subset", path);
        if (!subset.is_array()) throw ValidationError(path + ".subset", "expected an array of component indices");
        std::vector<int> idx;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            if (!subset[j].is_number_integer()) {
                throw ValidationError(path + ".subset[" + std::to_string(j) + "]", "expected an integer index");
            }
            idx.push_back(subset[j].get<int>());
        }
        SubsetMask mask = 0;
        try {
            mask = subset_from_indices(idx, n);
        } catch (const ValidationError& e) {
            throw ValidationError(path + ".subset", e.what());
        }
        const double lambda = number(require(entry, "lambda", path), path + ".lambda");
        if (!(lambda >= 0.0)) throw ValidationError(path + ".lambda", "negative rate");
        if (rates.contains(mask)) throw ValidationError(path + ".subset", "duplicate subset " + format_subset(mask));
        rates.set(mask, lambda);
    }
    return rates;
}

std::vector<double> singleton_lambdas(const SubsetRates& rates) {
    std::vector<double> out(rates.size(), 0.0);
    for (const auto& [s, rate] : rates.entries()) {
        if (subset_size(s) != 1) {
            throw ValidationError("rates" + format_subset(s), "only single-component rates are allowed for this family");
        }
        out[std::countr_zero(s)] = rate;
    }
    return out;
}

ModelSpec parse_model(const json& doc, Family family) {
    const auto allowed = family_keys(family);
    for (const auto& key : kModelKeys) {
        if (doc.contains(key) && !allowed.count(key)) {
            throw ValidationError(key, "field not used by family " + std::string(family_name(family)));
        }
    }
    const json& n_json = require(doc, "n", "");
    if (!n_json.is_number_integer()) throw ValidationError("n", "expected an integer");
    const int n = n_json.get<int>();
    if (n < 1 || n > kMaxComponents) {
        throw ValidationError("n", "component count must lie in 1.." + std::to_string(kMaxComponents));
    }
    SubsetRates rates = parse_rates(require(doc, "rates", ""), n);

    switch (family) {
        case Family::IndepExp:
        case Family::MOME:
        case Family::MG1:
            return {family, ExponentialParams{std::move(rates)}};
        case Family::IndepWeibull:
        case Family::MOMW:
            return {family, WeibullShockParams{std::move(rates), number_list(require(doc, "shapes", ""), "shapes")}};
        case Family::Crowder:
        case Family::LeeII: {
            const double gamma = doc.contains("gamma") ? number(doc["gamma"], "gamma")
                                 : family == Family::LeeII ? 0.0
                                                           : number(require(doc, "gamma", ""), "gamma");
            return {family, CrowderParams{singleton_lambdas(rates), number_list(require(doc, "shapes", ""), "shapes"),
                                          gamma, number(require(doc, "l", ""), "l")}};
        }
        case Family::LeeML:
            return {family, LeeParams{number(require(doc, "alpha", ""), "alpha"), number_list(require(doc, "c", ""), "c"),
                                      std::move(rates)}};
        case Family::LuBI:
            return {family, LuBhattacharyyaParams{singleton_lambdas(rates),
                                                  number_list(require(doc, "shapes", ""), "shapes"),
                                                  number(require(doc, "delta", ""), "delta"),
                                                  number(require(doc, "m", ""), "m")}};
    }
    throw ValidationError("family", "unknown family");
}

Spacing parse_spacing(std::string_view s, const std::string& path) {
    if (s == "lin" || s == "linear") return Spacing::Linear;
    if (s == "log") return Spacing::Log;
    throw ValidationError(path, "spacing must be lin or log");
}

GridSpec parse_grid_object(const json& g) {
    if (!g.is_object()) throw ValidationError("grid", "expected an object");
    for (const auto& item : g.items()) {
        if (item.key() != "start" && item.key() != "stop" && item.key() != "count" && item.key() != "spacing") {
            throw ValidationError("grid." + item.key(), "unknown key");
        }
    }
    GridSpec spec;
    spec.start = number(require(g, "start", "grid"), "grid.start");
    spec.stop = number(require(g, "stop", "grid"), "grid.stop");
    const json& count = require(g, "count", "grid");
    if (!count.is_number_integer()) throw ValidationError("grid.count", "expected an integer");
    spec.count = count.get<int>();
    spec.spacing = g.contains("spacing") ? parse_spacing(string_of(g["spacing"], "grid.spacing"), "grid.spacing")
                                         : Spacing::Log;
    return spec;
}

Structure parse_structure(std::string_view s) {
    if (s == "series") return Structure::Series;
    if (s == "parallel") return Structure::Parallel;
    throw ValidationError("structure", "structure must be series or parallel");
}

template <class T>
bool parse_full(std::string_view text, T& out) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

std::string_view command_name(Command c) noexcept {
    for (const auto& [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (const auto& [cmd, n] : kCommands) {
        if (n == name) return cmd;
    }
    throw ValidationError("command", "unknown command \"" + std::string(name) + "\"");
}

GridSpec parse_grid(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(':', pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (parts.size() != 4) throw ValidationError("grid", "expected START:STOP:COUNT:lin|log");
    GridSpec g;
    if (!parse_full(parts[0], g.start)) throw ValidationError("grid.start", "not a number");
    if (!parse_full(parts[1], g.stop)) throw ValidationError("grid.stop", "not a number");
    if (!parse_full(parts[2], g.count)) throw ValidationError("grid.count", "not an integer");
    g.spacing = parse_spacing(parts[3], "grid.spacing");
    return g;
}

void RunConfig::check() const {
    if (!(grid.start > 0.0)) throw ValidationError("grid.start", "must be positive");
    if (!(grid.stop > grid.start)) throw ValidationError("grid.stop", "must exceed grid.start");
    if (grid.count < 1) throw ValidationError("grid.count", "must be at least 1");
    if (command == Command::Classify && grid.count < 3) throw ValidationError("grid.count", "classify needs at least 3 points");
    if (samples && *samples < 1) throw ValidationError("samples", "must be at least 1");
    if (command == Command::Simulate && !samples) throw ValidationError("samples", "required by simulate");
}

RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("", "top-level value must be an object");
    for (const auto& item : doc.items()) {
        if (!kTopLevelKeys.count(item.key())) throw ValidationError(item.key(), "unknown key");
    }

    const Family family = parse_family(string_of(require(doc, "family", ""), "family"));
    RunConfig cfg(validate_model(parse_model(doc, family)));
    if (doc.contains("command")) cfg.command = parse_command(string_of(doc["command"], "command"));
    if (doc.contains("grid")) cfg.grid = parse_grid_object(doc["grid"]);
    if (doc.contains("metric")) cfg.metric = parse_metric(string_of(doc["metric"], "metric"));
    if (doc.contains("samples")) cfg.samples = unsigned_integer(doc["samples"], "samples");
    if (doc.contains("seed")) cfg.seed = unsigned_integer(doc["seed"], "seed");
    if (doc.contains("structure")) cfg.structure = parse_structure(string_of(doc["structure"], "structure"));
    if (doc.contains("output")) cfg.output = string_of(doc["output"], "output");
    cfg.check();
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error while reading " + path.string());
    return parse_config_text(buf.str());
}

namespace {

ordered_json rates_json(const SubsetRates& rates) {
    ordered_json arr = ordered_json::array();
    for (const auto& [s, rate] : rates.entries()) {
        arr.push_back(ordered_json{{"subset", subset_to_indices(s)}, {"lambda", rate}});
    }
    return arr;
}

ordered_json singleton_json(const std::vector<double>& lambdas) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        arr.push_back(ordered_json{{"subset", {static_cast<int>(i + 1)}}, {"lambda", lambdas[i]}});
    }
    return arr;
}

}  // namespace

std::string emit_config(const RunConfig& config) {
    const Model& model = config.model;
    ordered_json doc;
    doc["family"] = std::string(family_name(model.family()));
    doc["n"] = model.size();
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ExponentialParams>) {
                doc["rates"] = rates_json(p.rates);
            } else if constexpr (std::is_same_v<P, WeibullShockParams>) {
                doc["rates"] = rates_json(p.rates);
                doc["shapes"] = p.shapes;
            } else if constexpr (std::is_same_v<P, CrowderParams>) {
                doc["rates"] = singleton_json(p.lambdas);
                doc["shapes"] = p.shapes;
                doc["gamma"] = p.gamma;
                doc["l"] = p.l;
            } else if constexpr (std::is_same_v<P, LeeParams>) {
                doc["rates"] = rates_json(p.rates);
                doc["alpha"] = p.shape;
                doc["c"] = p.scales;
            } else {
                doc["rates"] = singleton_json(p.lambdas);
                doc["shapes"] = p.shapes;
                doc["delta"] = p.delta;
                doc["m"] = p.m;
            }
        },
        model.spec().params);
    doc["command"] = std::string(command_name(config.command));
    doc["grid"] = ordered_json{{"start", config.grid.start},
                               {"stop", config.grid.stop},
                               {"count", config.grid.count},
                               {"spacing", config.grid.spacing == Spacing::Log ? "log" : "lin"}};
    if (config.metric) doc["metric"] = std::string(metric_name(*config.metric));
    if (config.samples) doc["samples"] = *config.samples;
    if (config.seed) doc["seed"] = *config.seed;
    doc["structure"] = config.structure == Structure::Series ? "series" : "parallel";
    if (!config.output.empty()) doc["output"] = config.output;
    return doc.dump(2) + "\n";
}

}  // namespace deperr
