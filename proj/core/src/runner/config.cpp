#include "mechsq/runner/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mechsq/fock_space.hpp"
#include "mechsq/master_equation.hpp"
#include "mechsq/runner/time_series.hpp"

namespace mechsq::runner {

namespace {

[[noreturn]] void fail(const std::string& origin, const YAML::Node& node, const std::string& message) {
    std::ostringstream msg;
    msg << origin;
    if (node && node.Mark().line >= 0) msg << ":" << node.Mark().line + 1;
    msg << ": " << message;
    throw InvalidArgument(msg.str());
}

void reject_unknown(const std::string& origin, const YAML::Node& map, const std::set<std::string>& allowed,
                    const std::string& section) {
    if (!map.IsMap()) fail(origin, map, "'" + section + "' must be a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) {
            fail(origin, kv.first, "unknown key '" + key + "'" + (section.empty() ? "" : " in '" + section + "'"));
        }
    }
}

template <typename T>
T read(const std::string& origin, const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(origin, node, "invalid value for '" + key + "'");
    }
}

std::pair<Real, Real> read_range(const std::string& origin, const YAML::Node& node, const std::string& key) {
    if (!node.IsSequence() || node.size() != 2) fail(origin, node, "'" + key + "' must be a two-element list");
    return {read<Real>(origin, node[0], key), read<Real>(origin, node[1], key)};
}

WignerRequest parse_wigner(const std::string& origin, const YAML::Node& node) {
    reject_unknown(origin, node, {"times", "x_range", "y_range", "points"}, "wigner");
    WignerRequest w;
    if (node["times"]) w.times = read<std::vector<Real>>(origin, node["times"], "wigner.times");
    if (node["x_range"]) std::tie(w.x_min, w.x_max) = read_range(origin, node["x_range"], "wigner.x_range");
    if (node["y_range"]) std::tie(w.y_min, w.y_max) = read_range(origin, node["y_range"], "wigner.y_range");
    if (node["points"]) w.nx = w.ny = read<int>(origin, node["points"], "wigner.points");
    return w;
}

std::string format_value(Real v) { return format_number(v); }

}  // namespace

std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::gaussian_effective: return "gaussian_effective";
        case Engine::fock_full: return "fock_full";
        case Engine::fock_feedback: return "fock_feedback";
        case Engine::fock_no_feedback: return "fock_no_feedback";
    }
    return "unknown";
}

Engine parse_engine(std::string_view name) {
    for (Engine e : {Engine::gaussian_effective, Engine::fock_full, Engine::fock_feedback, Engine::fock_no_feedback}) {
        if (to_string(e) == name) return e;
    }
    throw InvalidArgument("unknown engine '" + std::string(name) + "'");
}

int ExperimentConfig::resolved_cutoff() const { return cutoff ? *cutoff : default_cutoff(params.n_th); }

FeedbackSchedule ExperimentConfig::resolved_schedule() const {
    FeedbackSchedule s;
    s.dt_measure = dt_measure ? *dt_measure : optimal_dt(params, 1);
    s.n_intervals = n_intervals ? *n_intervals : std::max(1, static_cast<int>(std::lround(horizon / s.dt_measure)));
    s.enabled = engine == Engine::fock_feedback;
    return s;
}

Real ExperimentConfig::resolved_integration_step() const {
    if (integration_step) return *integration_step;
    return engine == Engine::gaussian_effective ? default_moment_step(params) : default_fock_step(params);
}

void check(const ExperimentConfig& config) {
    validate(config.params);
    if (!(config.horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    if (!(config.sample_cadence > 0.0)) throw InvalidArgument("sample_cadence must be positive");
    if (config.integration_step && !(*config.integration_step > 0.0)) {
        throw InvalidArgument("integration_step must be positive");
    }
    if (!uses_schedule(config.engine) && (config.dt_measure || config.n_intervals)) {
        throw InvalidArgument("schedule is only valid for feedback engines (fock_feedback, fock_no_feedback)");
    }
    if (uses_schedule(config.engine)) config.resolved_schedule().validate();
    if (config.cutoff) FockSpace{*config.cutoff};
    if (config.steady_state.window < 2) throw InvalidArgument("steady_state.window must be at least 2");
    if (!(config.steady_state.tol > 0.0)) throw InvalidArgument("steady_state.tol must be positive");
    for (const auto& out : config.outputs) {
        if (out != "time_series" && out != "steady_state" && out != "wigner") {
            throw InvalidArgument("unknown output '" + out + "'");
        }
        if (out == "wigner" && !config.wigner) throw InvalidArgument("output 'wigner' requires a wigner section");
        if (out == "wigner" && !uses_fock(config.engine)) {
            throw InvalidArgument("wigner output requires a Fock engine");
        }
        // Steady state of the effective model needs damping.
        if (out == "steady_state" && config.engine == Engine::gaussian_effective) steady_state_moments(config.params);
    }
    if (config.wigner) {
        const auto& w = *config.wigner;
        if (w.nx < 2 || w.ny < 2) throw InvalidArgument("wigner.points must be at least 2");
        if (!(w.x_max > w.x_min) || !(w.y_max > w.y_min)) throw InvalidArgument("wigner ranges must be increasing");
        Real end = config.horizon;
        if (uses_schedule(config.engine)) {
            const auto s = config.resolved_schedule();
            end = s.dt_measure * static_cast<Real>(s.n_intervals);
        }
        for (Real t : w.times) {
            if (t < 0.0 || t > end + 1e-9) {
                throw InvalidArgument("wigner time " + format_value(t) + " lies outside the run [0, " + format_value(end) + "]");
            }
        }
    }
}

ExperimentConfig parse_config_string(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream msg;
        msg << origin << ":" << e.mark.line + 1 << ": parse error: " << e.msg;
        throw InvalidArgument(msg.str());
    }
    if (!root || root.IsNull()) throw InvalidArgument(origin + ": empty configuration");
    reject_unknown(origin, root,
                   {"name", "engine", "params", "schedule", "cutoff", "horizon", "sample_cadence", "integration_step",
                    "steady_state", "stop_when_steady", "outputs", "wigner", "output_path"},
                   "");

    ExperimentConfig cfg;
    if (root["name"]) cfg.name = read<std::string>(origin, root["name"], "name");
    if (!root["engine"]) fail(origin, root, "missing required key 'engine'");
    try {
        cfg.engine = parse_engine(read<std::string>(origin, root["engine"], "engine"));
    } catch (const InvalidArgument& e) {
        fail(origin, root["engine"], e.what());
    }

    if (!root["params"]) fail(origin, root, "missing required section 'params'");
    const auto params = root["params"];
    reject_unknown(origin, params, {"omega_m", "omega_a", "g", "gamma", "n_th"}, "params");
    auto req = [&](const char* key, Real& field) {
        if (!params[key]) fail(origin, params, std::string("missing required parameter '") + key + "'");
        field = read<Real>(origin, params[key], key);
    };
    req("omega_m", cfg.params.omega_m);
    req("omega_a", cfg.params.omega_a);
    req("g", cfg.params.g);
    req("gamma", cfg.params.gamma);
    req("n_th", cfg.params.n_th);

    if (const auto s = root["schedule"]) {
        reject_unknown(origin, s, {"dt_measure", "n_intervals"}, "schedule");
        if (!uses_schedule(cfg.engine)) fail(origin, s, "'schedule' is only valid for feedback engines");
        if (s["dt_measure"]) cfg.dt_measure = read<Real>(origin, s["dt_measure"], "schedule.dt_measure");
        if (s["n_intervals"]) cfg.n_intervals = read<int>(origin, s["n_intervals"], "schedule.n_intervals");
    }
    if (root["cutoff"]) cfg.cutoff = read<int>(origin, root["cutoff"], "cutoff");
    if (root["horizon"]) cfg.horizon = read<Real>(origin, root["horizon"], "horizon");
    if (root["sample_cadence"]) cfg.sample_cadence = read<Real>(origin, root["sample_cadence"], "sample_cadence");
    if (root["integration_step"]) {
        cfg.integration_step = read<Real>(origin, root["integration_step"], "integration_step");
    }
    if (const auto ss = root["steady_state"]) {
        reject_unknown(origin, ss, {"window", "tol"}, "steady_state");
        if (ss["window"]) cfg.steady_state.window = read<int>(origin, ss["window"], "steady_state.window");
        if (ss["tol"]) cfg.steady_state.tol = read<Real>(origin, ss["tol"], "steady_state.tol");
    }
    if (root["stop_when_steady"]) cfg.stop_when_steady = read<bool>(origin, root["stop_when_steady"], "stop_when_steady");
    if (root["outputs"]) cfg.outputs = read<std::vector<std::string>>(origin, root["outputs"], "outputs");
    if (root["wigner"]) cfg.wigner = parse_wigner(origin, root["wigner"]);
    if (root["output_path"]) cfg.output_path = read<std::string>(origin, root["output_path"], "output_path");

    try {
        check(cfg);
    } catch (const std::exception& e) {
        throw InvalidArgument(origin + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidArgument("cannot open config file " + file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_string(buffer.str(), file.string());
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config) {
    std::vector<std::pair<std::string, std::string>> out = {
        {"name", config.name},
        {"engine", std::string(to_string(config.engine))},
        {"omega_m", format_value(config.params.omega_m)},
        {"omega_a", format_value(config.params.omega_a)},
        {"g", format_value(config.params.g)},
        {"gamma", format_value(config.params.gamma)},
        {"n_th", format_value(config.params.n_th)},
        {"horizon", format_value(config.horizon)},
        {"integration_step", format_value(config.resolved_integration_step())},
    };
    if (uses_fock(config.engine)) out.emplace_back("cutoff", std::to_string(config.resolved_cutoff()));
    if (uses_schedule(config.engine)) {
        const auto s = config.resolved_schedule();
        out.emplace_back("dt_measure", format_value(s.dt_measure));
        out.emplace_back("n_intervals", std::to_string(s.n_intervals));
        out.emplace_back("feedback", s.enabled ? "on" : "off");
        out.emplace_back("stop_when_steady", config.stop_when_steady ? "true" : "false");
    } else {
        out.emplace_back("sample_cadence", format_value(config.sample_cadence));
    }
    out.emplace_back("steady_window", std::to_string(config.steady_state.window));
    out.emplace_back("steady_tol", format_value(config.steady_state.tol));
    return out;
}

}  // namespace mechsq::runner
