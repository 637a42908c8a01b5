#include "mechsq/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mechsq/master_equation.hpp"
#include "mechsq/parallel.hpp"

namespace mechsq {

void FeedbackSchedule::validate() const {
    if (!(dt_measure > 0.0)) throw InvalidArgument("dt_measure must be positive");
    if (n_intervals < 1) throw InvalidArgument("n_intervals must be at least 1");
}

MeasureResult measure_and_reset(const DensityMatrix& rho, const FockSpace& space) {
    const int n = space.cutoff();
    if (rho.dim() != space.joint_dim()) throw DimensionMismatch("measure_and_reset needs a joint qubit-oscillator state");

    const CMatrix& m = rho.matrix();
    const auto excited = m.block(space.index(kQubitExcited, 0), space.index(kQubitExcited, 0), n, n);
    const auto ground = m.block(space.index(kQubitGround, 0), space.index(kQubitGround, 0), n, n);

    MeasureResult out{DensityMatrix::unchecked(CMatrix()), excited.trace().real(), ground.trace().real(), {}};
    CMatrix osc = CMatrix::Zero(n, n);
    Real kept = 0.0;
    auto add_branch = [&](const auto& block, Real p, const char* label) {
        if (p < kBranchUnderflow) {
            if (p > 0.0) out.warnings.push_back(std::string("dropped ") + label + " branch with probability below 1e-14");
            return;
        }
        // p_k * (block / p_k)
        osc += block;
        kept += p;
    };
    add_branch(excited, out.p_e, "excited");
    add_branch(ground, out.p_g, "ground");
    if (kept <= 0.0) throw InvalidArgument("state has no qubit population to measure");
    osc /= kept;

    CMatrix joint = CMatrix::Zero(2 * n, 2 * n);
    joint.block(space.index(kQubitExcited, 0), space.index(kQubitExcited, 0), n, n) = osc;
    out.rho = DensityMatrix::unchecked(std::move(joint));
    const Real total = out.p_e + out.p_g;
    out.p_e /= total;
    out.p_g /= total;
    return out;
}

SteadyStateEstimate detect_steady_state(std::span<const Real> series, int window, Real tol) {
    if (window < 2) throw InvalidArgument("steady-state window must be at least 2");
    if (series.size() < static_cast<size_t>(window)) throw InvalidArgument("series shorter than steady-state window");
    const auto tail = series.last(static_cast<size_t>(window));
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    const Real mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<Real>(window);
    return {(*hi - *lo) < tol * std::abs(mean), mean};
}

SteadyStateEstimate detect_steady_state(const std::vector<ProtocolRecord>& records,
                                        const SteadyStateCriterion& criterion) {
    std::vector<Real> var(records.size());
    std::transform(records.begin(), records.end(), var.begin(), [](const auto& r) { return r.moments.var_x1; });
    return detect_steady_state(var, criterion.window, criterion.tol);
}

ProtocolResult run_protocol(const SystemParams& params, const FockSpace& space, const FeedbackSchedule& schedule,
                            const DensityMatrix& initial_osc, const ProtocolOptions& options) {
    validate(params);
    schedule.validate();
    if (initial_osc.dim() != space.cutoff()) throw DimensionMismatch("initial oscillator state does not match Fock space");

    const Real step = options.integration_step > 0.0 ? options.integration_step : default_fock_step(params);
    Propagator prop(build_h1(params, space), params, space, step);
    const QuadratureProbe probe(space);

    std::vector<Real> snapshot_times = options.snapshot_times;
    std::sort(snapshot_times.begin(), snapshot_times.end());
    auto next_snapshot = snapshot_times.begin();

    ProtocolResult result;
    result.records.reserve(static_cast<size_t>(schedule.n_intervals));
    CMatrix state = joint_state(kQubitExcited, initial_osc, space).matrix();

    while (next_snapshot != snapshot_times.end() && *next_snapshot <= 0.0) {
        result.snapshots.push_back({*next_snapshot, DensityMatrix::unchecked(state)});
        ++next_snapshot;
    }

    const Real dt = schedule.dt_measure;
    std::vector<Real> var_history;
    var_history.reserve(static_cast<size_t>(schedule.n_intervals));
    for (int k = 1; k <= schedule.n_intervals; ++k) {
        const Real t_start = dt * static_cast<Real>(k - 1);
        const Real t_end = dt * static_cast<Real>(k);
        Real t = t_start;
        while (next_snapshot != snapshot_times.end() && *next_snapshot < t_end) {
            prop.advance(state, *next_snapshot - t);
            t = *next_snapshot;
            result.snapshots.push_back({t, DensityMatrix::unchecked(state)});
            ++next_snapshot;
        }
        prop.advance(state, t_end - t);

        ensure_cutoff_headroom(state, space, options.top_level_tol, t_end);

        ProtocolRecord rec;
        rec.time = t_end;
        if (schedule.enabled) {
            auto measured = measure_and_reset(DensityMatrix::unchecked(std::move(state)), space);
            rec.p_e = measured.p_e;
            state = std::move(measured.rho).matrix();
        } else {
            const int n = space.cutoff();
            rec.p_e = state.block(space.index(kQubitExcited, 0), space.index(kQubitExcited, 0), n, n).trace().real() /
                      state.trace().real();
        }
        const CMatrix osc = oscillator_reduced(state, space);
        rec.moments = probe.moments(osc);
        rec.purity = purity(osc);
        result.records.push_back(rec);
        var_history.push_back(rec.moments.var_x1);

        while (next_snapshot != snapshot_times.end() && *next_snapshot <= t_end) {
            result.snapshots.push_back({*next_snapshot, DensityMatrix::unchecked(state)});
            ++next_snapshot;
        }

        if (options.stop_when_steady && var_history.size() >= static_cast<size_t>(options.stop_when_steady->window)) {
            const auto est = detect_steady_state(var_history, options.stop_when_steady->window,
                                                 options.stop_when_steady->tol);
            if (est.steady) {
                result.stopped_early = k < schedule.n_intervals;
                break;
            }
        }
    }
    result.final_state = DensityMatrix::unchecked(std::move(state));
    return result;
}

Real optimal_dt(const SystemParams& params, int p) {
    if (p < 1) throw InvalidArgument("period multiple p must be at least 1");
    validate(params);
    return 2.0 * kPi * static_cast<Real>(p) / params.omega_a;
}

std::vector<DtSweepPoint> sweep_dt(const SystemParams& params, const FockSpace& space,
                                   std::span<const Real> dt_grid, Real horizon, const DtSweepOptions& options) {
    validate(params);
    if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    for (Real dt : dt_grid) {
        if (!(dt > 0.0)) throw InvalidArgument("dt grid values must be positive");
    }
    std::vector<DtSweepPoint> out(dt_grid.size());
    const DensityMatrix initial = thermal_state(params.n_th, space);
    parallel_for(dt_grid.size(), options.threads, [&](size_t i) {
        DtSweepPoint& point = out[i];
        point.dt = dt_grid[i];
        try {
            FeedbackSchedule schedule;
            schedule.dt_measure = point.dt;
            schedule.n_intervals = std::max(1, static_cast<int>(std::lround(horizon / point.dt)));
            ProtocolOptions popt;
            popt.integration_step = options.integration_step;
            const auto run = run_protocol(params, space, schedule, initial, popt);
            if (run.records.size() < static_cast<size_t>(options.criterion.window)) {
                point.error = "horizon shorter than steady-state window";
                return;
            }
            const auto est = detect_steady_state(run.records, options.criterion);
            point.converged = est.steady;
            point.steady_var_x1 = est.value;
        } catch (const std::exception& e) {
            point.error = e.what();
        }
    });
    return out;
}

}  // namespace mechsq
