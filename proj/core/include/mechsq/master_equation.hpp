#pragma once

#include <functional>
#include <vector>

#include "mechsq/core_model.hpp"
#include "mechsq/fock_space.hpp"
#include "mechsq/types.hpp"

namespace mechsq {

/// Full qubit-oscillator Hamiltonian
///   (omega_a/2) sigma_z + omega_m (a^dag a + 1/2) + g sigma_x (a + a^dag)
/// on the joint space.
SparseCMatrix build_h1(const SystemParams& params, const FockSpace& space);

/// Effective dispersive Hamiltonian omega_m a^dag a + (g^2/omega_a) sigma_z (x) x1^2.
/// Commutes with sigma_z (x) I.
SparseCMatrix build_h_eff(const SystemParams& params, const FockSpace& space);

/// Oscillator-only Hamiltonian omega_m a^dag a + sign (g^2/omega_a) x1^2, i.e.
/// the effective model with the qubit frozen in an eigenstate of sigma_z.
SparseCMatrix build_frozen_qubit_hamiltonian(const SystemParams& params, const FockSpace& space, int qubit_sign);

/// Right-hand side of the thermal master equation
///   drho/dt = -i[H, rho] + gamma (n_th + 1) D[a] rho + gamma n_th D[a^dag] rho
/// with the bath acting on the oscillator factor. Works on the oscillator
/// space (dim N) or the joint space (dim 2N). Operators are assembled once.
class MasterEquation {
public:
    MasterEquation(const SparseCMatrix& hamiltonian, const SystemParams& params, const FockSpace& space);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const FockSpace& space() const noexcept { return space_; }

    /// out = drho/dt. rho must be Hermitian; the result is then exactly Hermitian.
    void rhs(const CMatrix& rho, CMatrix& out) const;

private:
    FockSpace space_;
    int dim_;
    Real rate_down_;
    Real rate_up_;
    // Adjoint of H_nh = H - (i/2)(rate_down a^dag a + rate_up a a^dag).
    SparseColMatrix h_nonhermitian_adj_;
    Eigen::ArrayXd sqrt_level_;
    mutable CMatrix scratch_;
};

/// Convenience wrapper; throws DimensionMismatch when rho and H disagree.
CMatrix lindblad_rhs(const DensityMatrix& rho, const SparseCMatrix& hamiltonian, const SystemParams& params,
                     const FockSpace& space);

/// Default master-equation step: one qubit period / 100.
Real default_fock_step(const SystemParams& params);

/// Fixed-step RK4 propagator with re-Hermitization after every step.
class Propagator {
public:
    Propagator(const SparseCMatrix& hamiltonian, const SystemParams& params, const FockSpace& space, Real max_step);

    /// Advances rho in place by `duration` using ceil(duration / max_step)
    /// equal steps.
    void advance(CMatrix& rho, Real duration);

    [[nodiscard]] const MasterEquation& equation() const noexcept { return eq_; }
    [[nodiscard]] Real max_step() const noexcept { return max_step_; }

private:
    void step(CMatrix& rho, Real h);

    MasterEquation eq_;
    Real max_step_;
    CMatrix k1_, k2_, k3_, k4_, tmp_;
};

/// Throws CutoffError ("increase cutoff") when the top Fock level of rho holds
/// more than `tol`.
void ensure_cutoff_headroom(const CMatrix& rho, const FockSpace& space, Real tol, Real t);

struct DensitySample {
    Real t = 0.0;
    DensityMatrix rho;
};

struct EvolveOptions {
    Real dt = 0.0;               ///< max integrator step
    Real sample_interval = 0.0;  ///< 0 samples only at start and end
    /// Abort with CutoffError when the top Fock level holds more than this at a sample.
    Real top_level_tol = 1e-6;
};

using SampleCallback = std::function<void(Real t, const CMatrix& rho)>;

/// Integrates the master equation from rho to t_final, invoking `on_sample`
/// at t = 0, every sample_interval, and t_final. Returns the final state.
/// Throws CutoffError ("increase cutoff") when the truncation is exhausted.
DensityMatrix evolve(const DensityMatrix& rho, const SparseCMatrix& hamiltonian, const SystemParams& params,
                     const FockSpace& space, Real t_final, const EvolveOptions& options,
                     const SampleCallback& on_sample);

/// Same as above, collecting the sampled states.
std::vector<DensitySample> evolve(const DensityMatrix& rho, const SparseCMatrix& hamiltonian,
                                  const SystemParams& params, const FockSpace& space, Real t_final,
                                  const EvolveOptions& options);

}  // namespace mechsq
