#include "mechsq/master_equation.hpp"

#include <cmath>
#include <sstream>

namespace mechsq {

namespace {

const Complex kI(0.0, 1.0);

void require_square_match(int rho_dim, const SparseCMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionMismatch("Hamiltonian must be square");
    if (rho_dim != h.rows()) {
        std::ostringstream msg;
        msg << "state dimension " << rho_dim << " does not match Hamiltonian dimension " << h.rows();
        throw DimensionMismatch(msg.str());
    }
}

// out = a * s for column-major sparse s, as column axpys over contiguous columns of a.
void dense_times_sparse(const CMatrix& a, const SparseColMatrix& s, CMatrix& out) {
    out.setZero();
    for (Eigen::Index j = 0; j < s.outerSize(); ++j) {
        auto out_j = out.col(j);
        for (SparseColMatrix::InnerIterator it(s, j); it; ++it) out_j += it.value() * a.col(it.row());
    }
}

}  // namespace

SparseCMatrix build_h1(const SystemParams& params, const FockSpace& space) {
    validate(params);
    const OperatorSet ops(space);
    const SparseCMatrix free_osc = params.omega_m * (ops.number + 0.5 * ops.identity_osc);
    SparseCMatrix h = (0.5 * params.omega_a) * ops.lift_qubit(ops.sigma_z);
    h += ops.lift_oscillator(free_osc);
    h += params.g * ops.lift(ops.sigma_x, ops.x1);
    h.makeCompressed();
    return h;
}

SparseCMatrix build_h_eff(const SystemParams& params, const FockSpace& space) {
    validate(params);
    const OperatorSet ops(space);
    const SparseCMatrix x1_sq = ops.x1 * ops.x1;
    SparseCMatrix h = ops.lift_oscillator(params.omega_m * ops.number);
    h += (params.g * params.g / params.omega_a) * ops.lift(ops.sigma_z, x1_sq);
    h.makeCompressed();
    return h;
}

SparseCMatrix build_frozen_qubit_hamiltonian(const SystemParams& params, const FockSpace& space, int qubit_sign) {
    validate(params);
    if (qubit_sign != 1 && qubit_sign != -1) throw InvalidArgument("qubit sign must be +1 or -1");
    const OperatorSet ops(space);
    SparseCMatrix h = params.omega_m * ops.number;
    h += (qubit_sign * params.g * params.g / params.omega_a) * SparseCMatrix(ops.x1 * ops.x1);
    h.makeCompressed();
    return h;
}

MasterEquation::MasterEquation(const SparseCMatrix& hamiltonian, const SystemParams& params, const FockSpace& space)
    : space_(space),
      dim_(static_cast<int>(hamiltonian.rows())),
      rate_down_(params.gamma * (params.n_th + 1.0)),
      rate_up_(params.gamma * params.n_th) {
    validate(params);
    if (hamiltonian.rows() != hamiltonian.cols()) throw DimensionMismatch("Hamiltonian must be square");
    const OperatorSet ops(space);
    SparseCMatrix lower;
    if (dim_ == space.cutoff()) {
        lower = ops.annihilate;
    } else if (dim_ == space.joint_dim()) {
        lower = ops.lift_oscillator(ops.annihilate);
    } else {
        throw DimensionMismatch("Hamiltonian dimension matches neither oscillator nor joint space");
    }
    const SparseCMatrix raise = SparseCMatrix(lower.adjoint());
    const SparseCMatrix n_down = raise * lower;
    const SparseCMatrix n_up = lower * raise;
    const SparseCMatrix h_nonhermitian = hamiltonian - (0.5 * kI) * (rate_down_ * n_down + rate_up_ * n_up);
    h_nonhermitian_adj_ = SparseColMatrix(h_nonhermitian.adjoint());
    h_nonhermitian_adj_.makeCompressed();
    sqrt_level_ = Eigen::ArrayXd::LinSpaced(space.cutoff(), 0.0, space.cutoff() - 1.0).sqrt();
    scratch_.resize(dim_, dim_);
}

void MasterEquation::rhs(const CMatrix& rho, CMatrix& out) const {
    if (out.rows() != dim_ || out.cols() != dim_) out.resize(dim_, dim_);

    // For Hermitian rho, y = rho H_nh^dag = (H_nh rho)^dag, so
    // -i (H_nh rho - rho H_nh^dag) = i (y - y^dag).
    dense_times_sparse(rho, h_nonhermitian_adj_, scratch_);
    for (Eigen::Index j = 0; j < dim_; ++j) {
        for (Eigen::Index i = 0; i < dim_; ++i) {
            const Complex y = scratch_(i, j);
            const Complex yt = scratch_(j, i);
            out(i, j) = Complex(-y.imag() - yt.imag(), y.real() - yt.real());
        }
    }

    // The bath acts on the oscillator factor of each qubit block:
    //   (a rho a^dag)(n, m)     = sqrt(n+1) sqrt(m+1) rho(n+1, m+1)
    //   (a^dag rho a)(n, m)     = sqrt(n) sqrt(m) rho(n-1, m-1)
    const int n = space_.cutoff();
    const int blocks = dim_ / n;
    const auto len = static_cast<Eigen::Index>(n - 1);
    for (int qc = 0; qc < blocks; ++qc) {
        for (int qr = 0; qr < blocks; ++qr) {
            const Eigen::Index r0 = static_cast<Eigen::Index>(qr) * n;
            for (int m = 0; m < n - 1; ++m) {
                const Eigen::Index c = static_cast<Eigen::Index>(qc) * n + m;
                out.col(c).segment(r0, len).array() +=
                    (rate_down_ * sqrt_level_[m + 1]) * sqrt_level_.segment(1, len).array() *
                    rho.col(c + 1).segment(r0 + 1, len).array();
                if (rate_up_ > 0.0) {
                    out.col(c + 1).segment(r0 + 1, len).array() +=
                        (rate_up_ * sqrt_level_[m + 1]) * sqrt_level_.segment(1, len).array() *
                        rho.col(c).segment(r0, len).array();
                }
            }
        }
    }
}

CMatrix lindblad_rhs(const DensityMatrix& rho, const SparseCMatrix& hamiltonian, const SystemParams& params,
                     const FockSpace& space) {
    require_square_match(rho.dim(), hamiltonian);
    const MasterEquation eq(hamiltonian, params, space);
    CMatrix out(rho.dim(), rho.dim());
    eq.rhs(rho.matrix(), out);
    return out;
}

Real default_fock_step(const SystemParams& params) { return (2.0 * kPi / params.omega_a) / 100.0; }

Propagator::Propagator(const SparseCMatrix& hamiltonian, const SystemParams& params, const FockSpace& space,
                       Real max_step)
    : eq_(hamiltonian, params, space), max_step_(max_step) {
    if (!(max_step > 0.0)) throw InvalidArgument("dt must be positive");
    const int d = eq_.dim();
    k1_.resize(d, d);
    k2_.resize(d, d);
    k3_.resize(d, d);
    k4_.resize(d, d);
    tmp_.resize(d, d);
}

void Propagator::step(CMatrix& rho, Real h) {
    eq_.rhs(rho, k1_);
    tmp_ = rho + (0.5 * h) * k1_;
    eq_.rhs(tmp_, k2_);
    tmp_ = rho + (0.5 * h) * k2_;
    eq_.rhs(tmp_, k3_);
    tmp_ = rho + h * k3_;
    eq_.rhs(tmp_, k4_);
    rho += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    const Eigen::Index d = rho.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
        rho(j, j) = Complex(rho(j, j).real(), 0.0);
        for (Eigen::Index i = j + 1; i < d; ++i) {
            const Complex avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = avg;
            rho(j, i) = std::conj(avg);
        }
    }
}

void Propagator::advance(CMatrix& rho, Real duration) {
    if (rho.rows() != eq_.dim() || rho.cols() != eq_.dim()) throw DimensionMismatch("state does not match propagator");
    if (!(duration >= 0.0)) throw InvalidArgument("duration must be non-negative");
    const auto steps = static_cast<long>(std::ceil(duration / max_step_ - 1e-12));
    if (steps == 0) return;
    const Real h = duration / static_cast<Real>(steps);
    for (long i = 0; i < steps; ++i) step(rho, h);
}

void ensure_cutoff_headroom(const CMatrix& rho, const FockSpace& space, Real tol, Real t) {
    const Real top = top_level_population(rho, space);
    if (top > tol) {
        std::ostringstream msg;
        msg << "top Fock level population " << top << " exceeds " << tol << " at t = " << t
            << "; increase cutoff (currently " << space.cutoff() << ")";
        throw CutoffError(msg.str());
    }
}

DensityMatrix evolve(const DensityMatrix& rho, const SparseCMatrix& hamiltonian, const SystemParams& params,
                     const FockSpace& space, Real t_final, const EvolveOptions& options,
                     const SampleCallback& on_sample) {
    require_square_match(rho.dim(), hamiltonian);
    if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be non-negative");
    if (!rho.satisfies_invariants()) throw InvalidArgument("initial state is not a valid density matrix");
    Propagator prop(hamiltonian, params, space, options.dt);

    CMatrix state = rho.matrix();
    auto emit = [&](Real t) {
        ensure_cutoff_headroom(state, space, options.top_level_tol, t);
        if (on_sample) on_sample(t, state);
    };

    emit(0.0);
    const Real interval = options.sample_interval > 0.0 ? options.sample_interval : t_final;
    const auto segments = interval > 0.0 ? static_cast<long>(std::ceil(t_final / interval - 1e-9)) : 0L;
    for (long k = 1; k <= segments; ++k) {
        const Real t_prev = interval * static_cast<Real>(k - 1);
        const Real t_next = k == segments ? t_final : interval * static_cast<Real>(k);
        prop.advance(state, t_next - t_prev);
        emit(t_next);
    }
    return DensityMatrix::unchecked(std::move(state));
}

std::vector<DensitySample> evolve(const DensityMatrix& rho, const SparseCMatrix& hamiltonian,
                                  const SystemParams& params, const FockSpace& space, Real t_final,
                                  const EvolveOptions& options) {
    std::vector<DensitySample> out;
    evolve(rho, hamiltonian, params, space, t_final, options,
           [&](Real t, const CMatrix& m) { out.push_back({t, DensityMatrix::unchecked(m)}); });
    return out;
}

}  // namespace mechsq
