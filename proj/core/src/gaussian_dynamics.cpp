#include "mechsq/gaussian_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace mechsq {

namespace {

const Mat2 kSymplectic = (Mat2() << 0.0, 1.0, -1.0, 0.0).finished();

Real max_eigen_magnitude(const Mat2& a) {
    const Eigen::EigenSolver<Mat2> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct MomentDerivative {
    Vec2 mean;
    Mat2 cov;
};

MomentDerivative derivative(const DriftDiffusion& dd, const Vec2& mean, const Mat2& cov) {
    return {dd.drift * mean, dd.drift * cov + cov * dd.drift.transpose() + dd.diffusion};
}

void rk4_step(const DriftDiffusion& dd, GaussianState& s, Real h) {
    const auto k1 = derivative(dd, s.mean, s.cov);
    const auto k2 = derivative(dd, s.mean + 0.5 * h * k1.mean, s.cov + 0.5 * h * k1.cov);
    const auto k3 = derivative(dd, s.mean + 0.5 * h * k2.mean, s.cov + 0.5 * h * k2.cov);
    const auto k4 = derivative(dd, s.mean + h * k3.mean, s.cov + h * k3.cov);
    s.mean += (h / 6.0) * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
    s.cov += (h / 6.0) * (k1.cov + 2.0 * k2.cov + 2.0 * k3.cov + k4.cov);
    s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
}

}  // namespace

bool GaussianState::is_physical(Real tol) const {
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    if (cov(0, 0) <= 0.0 || cov(1, 1) <= 0.0) return false;
    return cov.determinant() >= 1.0 - tol;
}

Real GaussianState::purity() const { return 1.0 / std::sqrt(cov.determinant()); }

Mat2 build_effective_hamiltonian_matrix(const SystemParams& params, QubitSign sign) {
    validate(params);
    const Real s = static_cast<Real>(static_cast<int>(sign));
    Mat2 h = Mat2::Zero();
    // omega_m a^dag a = omega_m (x1^2 + x2^2)/4 - omega_m/2
    h(0, 0) = 0.5 * params.omega_m + 2.0 * s * params.g * params.g / params.omega_a;
    h(1, 1) = 0.5 * params.omega_m;
    return h;
}

DriftDiffusion build_drift_diffusion(const SystemParams& params, const Mat2& hamiltonian) {
    if ((hamiltonian - hamiltonian.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("Hamiltonian matrix must be symmetric");
    }
    DriftDiffusion dd;
    dd.drift = 2.0 * kSymplectic * hamiltonian - 0.5 * params.gamma * Mat2::Identity();
    dd.diffusion = params.gamma * (2.0 * params.n_th + 1.0) * Mat2::Identity();
    return dd;
}

Real default_moment_step(const SystemParams& params) { return (2.0 * kPi / params.omega_a) / 200.0; }

std::vector<GaussianSample> evolve_moments(const GaussianState& initial, const DriftDiffusion& dd, Real t_final,
                                           const MomentEvolutionOptions& options) {
    if (!(options.dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be non-negative");
    if (!initial.is_physical()) throw InvalidArgument("initial Gaussian state is not physical");
    if (options.dt * max_eigen_magnitude(dd.drift) > 0.1) {
        std::ostringstream msg;
        msg << "step dt = " << options.dt << " too large for drift spectral radius " << max_eigen_magnitude(dd.drift)
            << " (need dt * max|eig(A)| <= 0.1)";
        throw StepSizeError(msg.str());
    }

    // Segments of length sample_interval, each split into equal steps no longer than dt.
    const Real interval = options.sample_interval > 0.0 ? options.sample_interval : options.dt;
    const auto segments = t_final > 0.0 ? static_cast<long>(std::ceil(t_final / interval - 1e-9)) : 0L;

    std::vector<GaussianSample> out;
    out.reserve(static_cast<size_t>(segments + 1));
    GaussianState state = initial;
    out.push_back({0.0, state});
    for (long k = 1; k <= segments; ++k) {
        const Real t_prev = interval * static_cast<Real>(k - 1);
        const Real t_next = k == segments ? t_final : interval * static_cast<Real>(k);
        const Real span = t_next - t_prev;
        const auto steps = std::max(1L, static_cast<long>(std::ceil(span / options.dt - 1e-12)));
        const Real h = span / static_cast<Real>(steps);
        for (long i = 0; i < steps; ++i) rk4_step(dd, state, h);
        out.push_back({t_next, state});
    }
    return out;
}

bool is_stable(const DriftDiffusion& dd) {
    const Eigen::EigenSolver<Mat2> es(dd.drift, false);
    return (es.eigenvalues().real().array() < 0.0).all();
}

LyapunovSolution solve_lyapunov_steady(const DriftDiffusion& dd) {
    if (!is_stable(dd)) throw NoSteadyState("no stable steady state (drift is not Hurwitz)");

    const Mat2& a = dd.drift;
    const Mat2& d = dd.diffusion;
    // Unknowns (s11, s12, s22) of the symmetric covariance.
    Eigen::Matrix3d m;
    m << 2.0 * a(0, 0), 2.0 * a(0, 1), 0.0,
         a(1, 0), a(0, 0) + a(1, 1), a(0, 1),
         0.0, 2.0 * a(1, 0), 2.0 * a(1, 1);
    const Eigen::Vector3d rhs(-d(0, 0), -0.5 * (d(0, 1) + d(1, 0)), -d(1, 1));
    const Eigen::Vector3d s = m.fullPivLu().solve(rhs);

    LyapunovSolution out;
    out.cov << s(0), s(1), s(1), s(2);
    out.physical = GaussianState{Vec2::Zero(), out.cov}.is_physical();
    return out;
}

}  // namespace mechsq
