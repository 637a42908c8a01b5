#include "mechsq/fock_space.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace mechsq {

namespace {

constexpr Real kThermalTailTol = 1e-6;

SparseCMatrix sparse_from_triplets(int rows, int cols, const std::vector<Eigen::Triplet<Complex>>& triplets) {
    SparseCMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

SparseCMatrix sparse_identity(int n) {
    SparseCMatrix m(n, n);
    m.setIdentity();
    return m;
}

}  // namespace

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 2) throw InvalidArgument("Fock cutoff must be at least 2");
}

int default_cutoff(Real n_th) {
    if (n_th <= 1.0) return 40;
    if (n_th <= 3.0) return 60;
    const Real ratio = n_th / (1.0 + n_th);
    return static_cast<int>(std::ceil(std::log(1e-8) / std::log(ratio))) + 10;
}

SparseCMatrix kron(const CMatrix& qubit_op, const SparseCMatrix& osc_op) {
    const auto n = static_cast<int>(osc_op.rows());
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (int qi = 0; qi < qubit_op.rows(); ++qi) {
        for (int qj = 0; qj < qubit_op.cols(); ++qj) {
            const Complex q = qubit_op(qi, qj);
            if (q == Complex(0.0)) continue;
            for (int k = 0; k < osc_op.outerSize(); ++k) {
                for (SparseCMatrix::InnerIterator it(osc_op, k); it; ++it) {
                    triplets.emplace_back(qi * n + static_cast<int>(it.row()), qj * n + static_cast<int>(it.col()),
                                          q * it.value());
                }
            }
        }
    }
    return sparse_from_triplets(static_cast<int>(qubit_op.rows()) * n, static_cast<int>(qubit_op.cols()) * n,
                                triplets);
}

OperatorSet::OperatorSet(const FockSpace& s) : space(s) {
    const int n = space.cutoff();
    std::vector<Eigen::Triplet<Complex>> lower;
    for (int k = 1; k < n; ++k) lower.emplace_back(k - 1, k, std::sqrt(static_cast<Real>(k)));
    annihilate = sparse_from_triplets(n, n, lower);
    create = SparseCMatrix(annihilate.adjoint());
    x1 = annihilate + create;
    x2 = Complex(0.0, 1.0) * (create - annihilate);
    number = create * annihilate;
    identity_osc = sparse_identity(n);

    const Complex i(0.0, 1.0);
    sigma_x = CMatrix::Zero(2, 2);
    sigma_x(0, 1) = sigma_x(1, 0) = 1.0;
    sigma_y = CMatrix::Zero(2, 2);
    sigma_y(0, 1) = -i;
    sigma_y(1, 0) = i;
    sigma_z = CMatrix::Zero(2, 2);
    sigma_z(kQubitExcited, kQubitExcited) = 1.0;
    sigma_z(kQubitGround, kQubitGround) = -1.0;
    sigma_plus = 0.5 * (sigma_x + i * sigma_y);
    sigma_minus = 0.5 * (sigma_x - i * sigma_y);
    identity_qubit = CMatrix::Identity(2, 2);
}

SparseCMatrix OperatorSet::lift_oscillator(const SparseCMatrix& op) const { return kron(identity_qubit, op); }

SparseCMatrix OperatorSet::lift_qubit(const CMatrix& op) const { return kron(op, identity_osc); }

SparseCMatrix OperatorSet::lift(const CMatrix& qubit_op, const SparseCMatrix& osc_op) const {
    return kron(qubit_op, osc_op);
}

DensityMatrix DensityMatrix::from_matrix(CMatrix m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("density matrix must be square");
    DensityMatrix rho(std::move(m));
    if (rho.hermiticity_error() > kHermitianTol) throw InvalidArgument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - 1.0) > kTraceTol) throw InvalidArgument("density matrix trace differs from 1");
    if (rho.min_eigenvalue() < -kPositivityTol) throw InvalidArgument("density matrix has a negative eigenvalue");
    return rho;
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    return from_matrix(psi * psi.adjoint());
}

Real DensityMatrix::hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

Real DensityMatrix::min_eigenvalue() const {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool DensityMatrix::satisfies_invariants() const {
    return hermiticity_error() <= kHermitianTol && std::abs(trace() - 1.0) <= kTraceTol &&
           min_eigenvalue() >= -kPositivityTol;
}

DensityMatrix thermal_state(Real n_th, const FockSpace& space) {
    if (!(n_th >= 0.0)) throw InvalidArgument("n_th must be non-negative");
    const int n = space.cutoff();
    CMatrix rho = CMatrix::Zero(n, n);
    if (n_th == 0.0) {
        rho(0, 0) = 1.0;
        return DensityMatrix::unchecked(std::move(rho));
    }
    const Real ratio = n_th / (1.0 + n_th);
    const Real tail = std::pow(ratio, n);
    if (tail >= kThermalTailTol) {
        const int needed = static_cast<int>(std::ceil(std::log(kThermalTailTol) / std::log(ratio)));
        std::ostringstream msg;
        msg << "cutoff " << n << " too small for n_th = " << n_th << " (tail mass " << tail
            << "); use a cutoff of at least " << needed;
        throw CutoffError(msg.str());
    }
    Real p = 1.0 / (1.0 + n_th);
    Real total = 0.0;
    for (int k = 0; k < n; ++k) {
        rho(k, k) = p;
        total += p;
        p *= ratio;
    }
    rho /= total;
    return DensityMatrix::unchecked(std::move(rho));
}

DensityMatrix joint_state(int qubit_level, const DensityMatrix& oscillator, const FockSpace& space) {
    if (oscillator.dim() != space.cutoff()) throw DimensionMismatch("oscillator state does not match Fock space");
    if (qubit_level != kQubitExcited && qubit_level != kQubitGround) throw InvalidArgument("qubit level must be 0 or 1");
    const int n = space.cutoff();
    CMatrix rho = CMatrix::Zero(2 * n, 2 * n);
    rho.block(qubit_level * n, qubit_level * n, n, n) = oscillator.matrix();
    return DensityMatrix::unchecked(std::move(rho));
}

CMatrix oscillator_reduced(const CMatrix& rho, const FockSpace& space) {
    const int n = space.cutoff();
    if (rho.rows() == n) return rho;
    if (rho.rows() != 2 * n) throw DimensionMismatch("state dimension matches neither oscillator nor joint space");
    return rho.topLeftCorner(n, n) + rho.bottomRightCorner(n, n);
}

DensityMatrix oscillator_reduced(const DensityMatrix& rho, const FockSpace& space) {
    return DensityMatrix::unchecked(oscillator_reduced(rho.matrix(), space));
}

Real top_level_population(const CMatrix& rho, const FockSpace& space) {
    const int n = space.cutoff();
    if (rho.rows() == n) return rho(n - 1, n - 1).real();
    if (rho.rows() != 2 * n) throw DimensionMismatch("state dimension matches neither oscillator nor joint space");
    return rho(n - 1, n - 1).real() + rho(2 * n - 1, 2 * n - 1).real();
}

}  // namespace mechsq
