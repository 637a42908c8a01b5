#pragma once

#include <cstddef>

#include "mechsq/types.hpp"

namespace mechsq {

/// Truncated oscillator space with levels 0..cutoff-1, joined with a qubit as
/// qubit (x) oscillator. Qubit basis index 0 is |e>, index 1 is |g>, so that
/// sigma_z |e> = +|e>.
class FockSpace {
public:
    explicit FockSpace(int cutoff);

    [[nodiscard]] int cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] int joint_dim() const noexcept { return 2 * cutoff_; }

    /// Joint-space index of |q> (x) |n>.
    [[nodiscard]] int index(int qubit, int n) const noexcept { return qubit * cutoff_ + n; }

    friend bool operator==(const FockSpace&, const FockSpace&) = default;

private:
    int cutoff_;
};

inline constexpr int kQubitExcited = 0;
inline constexpr int kQubitGround = 1;

/// Default cutoff for a given bath occupation: 40 for n_th <= 1, 60 for
/// n_th <= 3, otherwise large enough that the thermal tail beyond the cutoff is
/// below 1e-8 with ten levels of headroom.
int default_cutoff(Real n_th);

/// Ladder, quadrature, number and Pauli operators on one FockSpace, with lifts
/// to the joint space.
struct OperatorSet {
    explicit OperatorSet(const FockSpace& space);

    FockSpace space;

    // Oscillator factor (cutoff x cutoff).
    SparseCMatrix annihilate;
    SparseCMatrix create;
    SparseCMatrix x1;
    SparseCMatrix x2;
    SparseCMatrix number;
    SparseCMatrix identity_osc;

    // Qubit factor (2 x 2).
    CMatrix sigma_x;
    CMatrix sigma_y;
    CMatrix sigma_z;
    CMatrix sigma_plus;
    CMatrix sigma_minus;
    CMatrix identity_qubit;

    /// I_2 (x) op
    [[nodiscard]] SparseCMatrix lift_oscillator(const SparseCMatrix& op) const;
    /// op (x) I_N
    [[nodiscard]] SparseCMatrix lift_qubit(const CMatrix& op) const;
    /// qubit_op (x) osc_op
    [[nodiscard]] SparseCMatrix lift(const CMatrix& qubit_op, const SparseCMatrix& osc_op) const;
};

/// Hermitian, unit-trace operator. Construction through `from_matrix` checks
/// the invariants; `unchecked` is for integrator internals that re-verify at
/// sample points.
class DensityMatrix {
public:
    static constexpr Real kHermitianTol = 1e-10;
    static constexpr Real kTraceTol = 1e-8;
    static constexpr Real kPositivityTol = 1e-8;

    /// Throws InvalidArgument when any invariant fails.
    static DensityMatrix from_matrix(CMatrix m);
    static DensityMatrix unchecked(CMatrix m) { return DensityMatrix(std::move(m)); }
    /// |psi><psi| for a normalized ket.
    static DensityMatrix pure(const CVector& psi);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(m_.rows()); }
    [[nodiscard]] const CMatrix& matrix() const noexcept { return m_; }

    [[nodiscard]] Real trace() const { return m_.trace().real(); }
    /// max |rho - rho^dag| elementwise
    [[nodiscard]] Real hermiticity_error() const;
    [[nodiscard]] Real min_eigenvalue() const;
    /// Trace, Hermiticity and positivity within the class tolerances.
    [[nodiscard]] bool satisfies_invariants() const;

private:
    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

/// Geometric thermal distribution on the oscillator, renormalized over the
/// cutoff. Throws CutoffError when the mass beyond the cutoff is >= 1e-6.
DensityMatrix thermal_state(Real n_th, const FockSpace& space);

/// |q><q| (x) rho_osc on the joint space.
DensityMatrix joint_state(int qubit_level, const DensityMatrix& oscillator, const FockSpace& space);

/// Partial trace over the qubit; passes oscillator-only states through.
CMatrix oscillator_reduced(const CMatrix& rho, const FockSpace& space);
DensityMatrix oscillator_reduced(const DensityMatrix& rho, const FockSpace& space);

/// Population of the highest Fock level (summed over the qubit for joint states).
Real top_level_population(const CMatrix& rho, const FockSpace& space);

/// Kronecker product of a dense qubit operator and a sparse oscillator operator.
SparseCMatrix kron(const CMatrix& qubit_op, const SparseCMatrix& osc_op);

}  // namespace mechsq
