#include "mechsq/runner/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mechsq/gaussian_dynamics.hpp"
#include "mechsq/master_equation.hpp"

namespace mechsq::runner {

namespace {

// Invariant checks cost an eigendecomposition; run them on this many samples at most.
constexpr size_t kInvariantChecks = 64;

void track_invariants(ExperimentResult& result, const CMatrix& rho) {
    const auto dm = DensityMatrix::unchecked(rho);
    result.max_trace_error = std::max(result.max_trace_error, std::abs(dm.trace() - 1.0));
    result.max_hermiticity_error = std::max(result.max_hermiticity_error, dm.hermiticity_error());
    result.min_eigenvalue = std::min(result.min_eigenvalue, dm.min_eigenvalue());
}

WignerGrid make_wigner(const WignerRequest& w, const CMatrix& rho, const FockSpace& space) {
    const auto xs = linspace(w.x_min, w.x_max, w.nx);
    const auto ys = linspace(w.y_min, w.y_max, w.ny);
    return wigner_grid(DensityMatrix::unchecked(rho), space, xs, ys);
}

bool wants(const ExperimentConfig& c, const std::string& out) {
    return std::find(c.outputs.begin(), c.outputs.end(), out) != c.outputs.end();
}

void run_gaussian(const ExperimentConfig& config, ExperimentResult& result) {
    const auto dd = build_drift_diffusion(config.params, build_effective_hamiltonian_matrix(config.params));
    MomentEvolutionOptions opt;
    opt.dt = config.resolved_integration_step();
    opt.sample_interval = config.sample_cadence;
    const auto traj = evolve_moments(GaussianState::thermal(config.params.n_th), dd, config.horizon, opt);
    for (const auto& s : traj) {
        QuadratureMoments m;
        m.mean = s.state.mean;
        m.var_x1 = s.state.var_x1();
        m.var_x2 = s.state.var_x2();
        m.cov = s.state.covariance();
        result.series.append(s.t, m, s.state.purity(), config.params.n_th);
        result.min_cov_determinant = std::min(result.min_cov_determinant, s.state.cov.determinant());
    }
}

void run_fock_full(const ExperimentConfig& config, ExperimentResult& result) {
    const FockSpace space(config.resolved_cutoff());
    const QuadratureProbe probe(space);
    Propagator prop(build_h1(config.params, space), config.params, space, config.resolved_integration_step());
    CMatrix state = joint_state(kQubitExcited, thermal_state(config.params.n_th, space), space).matrix();

    std::set<Real> wigner_times;
    if (config.wigner && wants(config, "wigner")) wigner_times.insert(config.wigner->times.begin(), config.wigner->times.end());

    const auto segments = static_cast<long>(std::ceil(config.horizon / config.sample_cadence - 1e-9));
    const size_t check_stride = std::max<size_t>(1, static_cast<size_t>(segments) / kInvariantChecks);
    auto sample = [&](Real t, long k) {
        ensure_cutoff_headroom(state, space, 1e-6, t);
        const CMatrix osc = oscillator_reduced(state, space);
        result.series.append(t, probe.moments(osc), purity(osc), config.params.n_th);
        if (static_cast<size_t>(k) % check_stride == 0 || k == segments) track_invariants(result, state);
    };

    Real t = 0.0;
    auto advance_to = [&](Real target) {
        while (!wigner_times.empty() && *wigner_times.begin() <= target) {
            const Real tw = *wigner_times.begin();
            prop.advance(state, tw - t);
            t = tw;
            result.wigner.push_back({tw, make_wigner(*config.wigner, state, space)});
            wigner_times.erase(wigner_times.begin());
        }
        prop.advance(state, target - t);
        t = target;
    };

    advance_to(0.0);
    sample(0.0, 0);
    for (long k = 1; k <= segments; ++k) {
        const Real target = k == segments ? config.horizon : config.sample_cadence * static_cast<Real>(k);
        advance_to(target);
        sample(target, k);
    }
}

void run_protocol_engine(const ExperimentConfig& config, ExperimentResult& result) {
    const FockSpace space(config.resolved_cutoff());
    const auto schedule = config.resolved_schedule();
    const auto initial = thermal_state(config.params.n_th, space);

    ProtocolOptions opt;
    opt.integration_step = config.resolved_integration_step();
    if (config.stop_when_steady) opt.stop_when_steady = config.steady_state;
    if (config.wigner && wants(config, "wigner")) opt.snapshot_times = config.wigner->times;
    const auto run = run_protocol(config.params, space, schedule, initial, opt);

    result.series.has_p_e = true;
    const QuadratureProbe probe(space);
    result.series.append(0.0, probe.moments(initial.matrix()), purity(initial), config.params.n_th, 1.0);
    for (const auto& r : run.records) result.series.append(r.time, r.moments, r.purity, config.params.n_th, r.p_e);

    track_invariants(result, joint_state(kQubitExcited, initial, space).matrix());
    track_invariants(result, run.final_state.matrix());
    for (const auto& snap : run.snapshots) {
        track_invariants(result, snap.rho.matrix());
        result.wigner.push_back({snap.time, make_wigner(*config.wigner, snap.rho.matrix(), space)});
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    check(config);
    ExperimentResult result;
    result.advisories = validate(config.params).advisories;
    switch (config.engine) {
        case Engine::gaussian_effective: run_gaussian(config, result); break;
        case Engine::fock_full: run_fock_full(config, result); break;
        case Engine::fock_feedback:
        case Engine::fock_no_feedback: run_protocol_engine(config, result); break;
    }
    const auto var = result.series.var_x1();
    if (var.size() >= static_cast<size_t>(config.steady_state.window)) {
        result.steady = detect_steady_state(var, config.steady_state.window, config.steady_state.tol);
    }
    return result;
}

}  // namespace mechsq::runner
