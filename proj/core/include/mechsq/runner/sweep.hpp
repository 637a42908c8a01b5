#pragma once

#include <string>
#include <vector>

#include "mechsq/runner/config.hpp"
#include "mechsq/runner/scenarios.hpp"
#include "mechsq/runner/time_series.hpp"

namespace mechsq::runner {

/// Axes accepted by run_sweep: SystemParams fields and schedule fields.
const std::vector<std::string>& sweep_axes();

/// Returns a copy of config with the named field set to value. Throws
/// InvalidArgument for unknown axes or values the config rejects.
ExperimentConfig with_axis_value(const ExperimentConfig& config, const std::string& axis, Real value);

struct SweepPoint {
    Real value = 0.0;
    bool ok = false;
    bool steady = false;
    Real steady_var_x1 = 0.0;
    Real final_purity = 0.0;
    std::optional<Real> final_p_e;
    std::string error;
};

struct SweepReport {
    std::vector<SweepPoint> points;
    Table summary;
    Manifest manifest;
    std::vector<std::filesystem::path> files;
    [[nodiscard]] bool all_ok() const { return manifest.all_ok(); }
};

/// One experiment per value, run concurrently; writes one time-series CSV per
/// point, <name>_sweep_<axis>.csv with steady-state quantities, and a
/// manifest. Per-point failures are recorded, not thrown. An empty value list
/// produces an empty table.
SweepReport run_sweep(const ExperimentConfig& config, const std::string& axis, const std::vector<Real>& values,
                      const RunOptions& options);

}  // namespace mechsq::runner
