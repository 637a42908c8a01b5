#pragma once

#include <vector>

#include "mechsq/core_model.hpp"
#include "mechsq/types.hpp"

namespace mechsq {

/// Gaussian state of the oscillator in quadratures x1 = a + a^dag,
/// x2 = i(a^dag - a). The covariance uses cov_jj = Var(x_j), so the vacuum
/// has cov = identity.
struct GaussianState {
    Vec2 mean = Vec2::Zero();
    Mat2 cov = Mat2::Identity();

    static GaussianState vacuum() { return {}; }
    static GaussianState thermal(Real n_th) { return {Vec2::Zero(), (1.0 + 2.0 * n_th) * Mat2::Identity()}; }

    [[nodiscard]] Real var_x1() const { return cov(0, 0); }
    [[nodiscard]] Real var_x2() const { return cov(1, 1); }
    [[nodiscard]] Real covariance() const { return 0.5 * (cov(0, 1) + cov(1, 0)); }

    /// Symmetric, positive definite and det(cov) >= 1 - tol.
    [[nodiscard]] bool is_physical(Real tol = 1e-9) const;
    /// 1 / sqrt(det cov).
    [[nodiscard]] Real purity() const;
};

/// Linear moment dynamics d<r>/dt = A <r>, dcov/dt = A cov + cov A^T + D.
struct DriftDiffusion {
    Mat2 drift = Mat2::Zero();
    Mat2 diffusion = Mat2::Zero();
};

/// Eigenvalue of sigma_z the qubit is frozen into.
enum class QubitSign : int { excited = +1, ground = -1 };

/// H such that omega_m a^dag a + sign (g^2/omega_a) x1^2 = r^T H r / 2 + const.
Mat2 build_effective_hamiltonian_matrix(const SystemParams& params, QubitSign sign = QubitSign::excited);

/// A = 2 Omega H - (gamma/2) I with Omega = [[0,1],[-1,0]] (the factor 2 comes
/// from [x1, x2] = 2i), D = gamma (2 n_th + 1) I.
DriftDiffusion build_drift_diffusion(const SystemParams& params, const Mat2& hamiltonian);

struct GaussianSample {
    Real t = 0.0;
    GaussianState state;
};

struct MomentEvolutionOptions {
    Real dt = 0.0;               ///< max integrator step
    Real sample_interval = 0.0;  ///< 0 records every step of length dt
};

/// Default RK4 step: one qubit period / 200.
Real default_moment_step(const SystemParams& params);

/// Fixed-step RK4 integration of the moment equations. The returned trajectory
/// starts with the initial state and always ends with the state at t_final.
/// Throws StepSizeError when dt * max|eig(A)| > 0.1.
std::vector<GaussianSample> evolve_moments(const GaussianState& initial, const DriftDiffusion& dd, Real t_final,
                                           const MomentEvolutionOptions& options);

/// True iff every eigenvalue of the drift has a strictly negative real part.
bool is_stable(const DriftDiffusion& dd);

struct LyapunovSolution {
    Mat2 cov = Mat2::Zero();
    /// False when the solution violates det(cov) >= 1 (e.g. D = 0).
    bool physical = false;
};

/// Solves A cov + cov A^T + D = 0 for symmetric cov via the 3x3 linear system
/// in (cov11, cov12, cov22). Throws NoSteadyState for a non-Hurwitz drift.
LyapunovSolution solve_lyapunov_steady(const DriftDiffusion& dd);

}  // namespace mechsq
