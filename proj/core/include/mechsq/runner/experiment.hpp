#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mechsq/feedback.hpp"
#include "mechsq/observables.hpp"
#include "mechsq/runner/config.hpp"
#include "mechsq/runner/time_series.hpp"

namespace mechsq::runner {

struct WignerSnapshot {
    Real time = 0.0;
    WignerGrid grid;
};

struct ExperimentResult {
    TimeSeries series;
    /// Trailing-window estimate of var_x1; empty when the series is shorter than the window.
    std::optional<SteadyStateEstimate> steady;
    std::vector<WignerSnapshot> wigner;
    std::vector<std::string> advisories;
    /// Worst invariant violations seen at samples (Fock engines) or det(cov) - 1 minimum (Gaussian).
    Real max_trace_error = 0.0;
    Real max_hermiticity_error = 0.0;
    Real min_eigenvalue = 0.0;
    Real min_cov_determinant = 1.0;
};

/// Runs one configured experiment in the calling thread.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace mechsq::runner
