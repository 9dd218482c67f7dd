#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "newsca/engine.hpp"
#include "newsca/model.hpp"
#include "newsca/random.hpp"

namespace newsca {

inline constexpr std::string_view kVersion = "0.1.0";

// Resolved inputs of one command invocation. Written next to every output;
// feeding it back through --manifest reproduces those outputs.
struct RunManifest {
    std::string command;
    std::string version{kVersion};
    std::string rng{kRngId};
    SimulationConfig simulation{};
    std::optional<std::size_t> runs;
    std::optional<AnalyticModel> model;
    std::optional<long> t_min;
    std::optional<long> t_max;
    std::optional<std::string> input;

    friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

inline nlohmann::ordered_json to_json(const LogisticParams& p) {
    return {{"C", p.C}, {"tau", p.tau}, {"gamma", p.gamma}};
}

inline LogisticParams logistic_from_json(const nlohmann::ordered_json& j) {
    return {j.at("C").get<double>(), j.at("tau").get<double>(), j.at("gamma").get<double>()};
}

inline nlohmann::ordered_json to_json(const SimulationConfig& c) {
    const Position seed = c.resolved_seed();
    nlohmann::ordered_json j = {
        {"width", c.width},
        {"height", c.height},
        {"seed_row", seed.row},
        {"seed_col", seed.col},
        {"boundary", std::string(to_string(c.boundary))},
        {"rng_seed", c.rng_seed},
        {"max_steps", c.max_steps},
        {"adoption_threshold", c.rule.adoption_threshold},
        {"boost_factor", c.rule.boost_factor},
        {"boost_below", c.rule.boost_below},
    };
    j["snapshot_every"] = c.snapshot_every ? nlohmann::ordered_json(*c.snapshot_every) : nullptr;
    return j;
}

inline SimulationConfig simulation_from_json(const nlohmann::ordered_json& j) {
    SimulationConfig c;
    c.width = j.at("width").get<std::size_t>();
    c.height = j.at("height").get<std::size_t>();
    c.seed_position = Position{j.at("seed_row").get<std::size_t>(),
                               j.at("seed_col").get<std::size_t>()};
    c.boundary = parse_boundary(j.at("boundary").get<std::string>());
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.max_steps = j.at("max_steps").get<std::size_t>();
    c.rule.adoption_threshold = j.at("adoption_threshold").get<double>();
    c.rule.boost_factor = j.at("boost_factor").get<double>();
    c.rule.boost_below = j.at("boost_below").get<std::size_t>();
    if (j.contains("snapshot_every") && !j.at("snapshot_every").is_null())
        c.snapshot_every = j.at("snapshot_every").get<std::size_t>();
    return c;
}

inline nlohmann::ordered_json to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["rng"] = m.rng;
    if (m.command == "simulate" || m.command == "ensemble") {
        j["simulation"] = to_json(m.simulation);
        j["conventions"] = {
            {"draw", "p uniform on [0,1), fresh per White cell per step, row-major order"},
            {"convergence", "no Black cell and one further step leaves the grid unchanged"},
            {"boundary", "bounded grids use truncated Moore neighborhoods"},
        };
    }
    if (m.runs) j["runs"] = *m.runs;
    if (m.model) j["model"] = {{"grey", to_json(m.model->grey)}, {"white", to_json(m.model->white)}};
    if (m.t_min) j["t_min"] = *m.t_min;
    if (m.t_max) j["t_max"] = *m.t_max;
    if (m.input) j["input"] = *m.input;
    return j;
}

inline RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    if (j.contains("version")) m.version = j.at("version").get<std::string>();
    if (j.contains("rng")) {
        m.rng = j.at("rng").get<std::string>();
        if (m.rng != kRngId)
            throw std::invalid_argument("manifest uses unsupported generator '" + m.rng + "'");
    }
    if (j.contains("simulation")) m.simulation = simulation_from_json(j.at("simulation"));
    if (j.contains("runs")) m.runs = j.at("runs").get<std::size_t>();
    if (j.contains("model"))
        m.model = AnalyticModel{logistic_from_json(j.at("model").at("grey")),
                                logistic_from_json(j.at("model").at("white"))};
    if (j.contains("t_min")) m.t_min = j.at("t_min").get<long>();
    if (j.contains("t_max")) m.t_max = j.at("t_max").get<long>();
    if (j.contains("input")) m.input = j.at("input").get<std::string>();
    return m;
}

inline std::string dump_manifest(const RunManifest& m) { return to_json(m).dump(2) + "\n"; }

inline RunManifest parse_manifest(const std::string& text) {
    return manifest_from_json(nlohmann::ordered_json::parse(text));
}

}  // namespace newsca
