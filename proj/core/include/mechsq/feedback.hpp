#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mechsq/core_model.hpp"
#include "mechsq/fock_space.hpp"
#include "mechsq/observables.hpp"
#include "mechsq/types.hpp"

namespace mechsq {

/// Measure the qubit every dt_measure, flip it back to |e> when found in |g>.
/// With enabled == false the same cadence is used for recording only.
struct FeedbackSchedule {
    Real dt_measure = 0.0;
    int n_intervals = 1;
    bool enabled = true;

    void validate() const;
};

struct ProtocolRecord {
    Real time = 0.0;
    Real p_e = 1.0;  ///< excited-state probability found at the measurement
    QuadratureMoments moments;
    Real purity = 1.0;  ///< oscillator reduced-state purity
};

struct MeasureResult {
    DensityMatrix rho;
    Real p_e = 0.0;
    Real p_g = 0.0;
    std::vector<std::string> warnings;
};

/// Branch probabilities below this are dropped from the average map.
inline constexpr Real kBranchUnderflow = 1e-14;

/// Outcome-averaged projective measurement of the qubit followed by a flip on
/// |g>: rho -> (p_e rho_e + p_g rho_g) (x) |e><e|.
MeasureResult measure_and_reset(const DensityMatrix& rho, const FockSpace& space);

struct SteadyStateCriterion {
    int window = 20;   ///< trailing measurement intervals inspected
    Real tol = 1e-3;   ///< relative spread (max - min) / mean
};

struct SteadyStateEstimate {
    bool steady = false;
    Real value = 0.0;  ///< mean over the trailing window
};

/// Steady when max - min over the trailing `window` values is below
/// tol * mean. Throws InvalidArgument for window < 2 or a short series.
SteadyStateEstimate detect_steady_state(std::span<const Real> series, int window, Real tol);
SteadyStateEstimate detect_steady_state(const std::vector<ProtocolRecord>& records,
                                        const SteadyStateCriterion& criterion = {});

struct ProtocolSnapshot {
    Real time = 0.0;
    DensityMatrix rho;  ///< joint state
};

struct ProtocolOptions {
    Real integration_step = 0.0;  ///< 0 selects default_fock_step(params)
    Real top_level_tol = 1e-6;
    /// Stop as soon as var_x1 meets the criterion (after at least `window` records).
    std::optional<SteadyStateCriterion> stop_when_steady;
    /// Times at which the joint state is captured; a time coinciding with a
    /// measurement is captured after the reset.
    std::vector<Real> snapshot_times;
};

struct ProtocolResult {
    std::vector<ProtocolRecord> records;  ///< one per completed interval
    std::vector<ProtocolSnapshot> snapshots;
    DensityMatrix final_state = DensityMatrix::unchecked(CMatrix());
    bool stopped_early = false;
};

/// Starts from |e><e| (x) initial_osc and alternates evolution under the full
/// Hamiltonian for dt_measure with measure_and_reset (skipped when the schedule
/// is disabled). Throws CutoffError when the truncation is exhausted.
ProtocolResult run_protocol(const SystemParams& params, const FockSpace& space, const FeedbackSchedule& schedule,
                            const DensityMatrix& initial_osc, const ProtocolOptions& options = {});

/// 2 p pi / omega_a, the p-th qubit period. Throws InvalidArgument for p < 1.
Real optimal_dt(const SystemParams& params, int p = 1);

struct DtSweepPoint {
    Real dt = 0.0;
    bool converged = false;
    Real steady_var_x1 = 0.0;  ///< trailing-window mean, reported even when unconverged
    std::string error;        ///< non-empty when the run failed
};

struct DtSweepOptions {
    SteadyStateCriterion criterion;
    Real integration_step = 0.0;
    int threads = 1;
};

/// Runs the feedback protocol for each interval over `horizon` and reports the
/// detected steady var_x1. Points run concurrently; output order follows the grid.
std::vector<DtSweepPoint> sweep_dt(const SystemParams& params, const FockSpace& space,
                                   std::span<const Real> dt_grid, Real horizon, const DtSweepOptions& options = {});

}  // namespace mechsq
