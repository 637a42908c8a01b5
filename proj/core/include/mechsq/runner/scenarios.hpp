#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mechsq/runner/config.hpp"
#include "mechsq/runner/manifest.hpp"

namespace mechsq::runner {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::optional<int> cutoff;  ///< overrides every Fock curve's cutoff
    int threads = 1;
};

/// One output curve of a scenario.
struct CurveSpec {
    std::string stem;  ///< output file stem, unique within the scenario
    ExperimentConfig config;
};

struct ScenarioPlan {
    std::string name;
    std::vector<CurveSpec> curves;
    /// Set for the measurement-interval sweep, which writes a dt table instead of curves.
    std::optional<ExperimentConfig> dt_sweep_base;
    std::vector<Real> dt_grid;
};

/// Names accepted by run_scenario besides "custom:<path>".
const std::vector<std::string>& scenario_names();

/// Builds the preset plan for a scenario name (or custom:<config path>).
/// Throws InvalidArgument for unknown names.
ScenarioPlan plan_scenario(const std::string& name);

/// Measurement-interval grid k * 2.5 T / points, k = 1..points, T = 2 pi / omega_a.
std::vector<Real> dt_sweep_grid(const SystemParams& params, int points = 40, Real max_periods = 2.5);

struct ScenarioReport {
    Manifest manifest;
    std::vector<std::filesystem::path> files;
    [[nodiscard]] bool all_ok() const { return manifest.all_ok(); }
};

/// Runs every curve (concurrently up to options.threads), writes one CSV or
/// grid file per output plus <name>_manifest.txt. A failing curve is recorded
/// in the manifest and does not abort the others.
ScenarioReport run_scenario(const std::string& name, const RunOptions& options);
ScenarioReport run_plan(const ScenarioPlan& plan, const RunOptions& options);

}  // namespace mechsq::runner
