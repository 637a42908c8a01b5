#include <gtest/gtest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "mechsq/gaussian_dynamics.hpp"
#include "mechsq/master_equation.hpp"
#include "mechsq/observables.hpp"
#include "support.hpp"

using namespace mechsq;

namespace {

Real factorial(int n) { return std::tgamma(n + 1.0); }

// <m|D(alpha)|n> in closed form (associated Laguerre polynomials).
Complex displacement_element(int m, int n, Complex alpha) {
    const Real r2 = std::norm(alpha);
    const Real damp = std::exp(-0.5 * r2);
    if (m >= n) {
        return std::sqrt(factorial(n) / factorial(m)) * std::pow(alpha, m - n) * damp *
               std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(m - n), r2);
    }
    return std::sqrt(factorial(m) / factorial(n)) * std::pow(-std::conj(alpha), n - m) * damp *
           std::assoc_laguerre(static_cast<unsigned>(m), static_cast<unsigned>(n - m), r2);
}

// W(x, y) = (1/pi^2) Int Tr[rho D(alpha)] exp(-2i (x alpha_i - y alpha_r)) d^2 alpha by direct quadrature.
std::vector<Real> brute_force_wigner(const CMatrix& rho, const std::vector<std::pair<Real, Real>>& points) {
    const int n = static_cast<int>(rho.rows());
    const Real half = 9.0, h = 0.05;
    const int steps = static_cast<int>(2 * half / h);
    std::vector<Real> out(points.size(), 0.0);
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
            const Complex alpha(-half + h * i, -half + h * j);
            Complex chi = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) chi += rho(b, a) * displacement_element(a, b, alpha);
            for (size_t k = 0; k < points.size(); ++k) {
                const auto [x, y] = points[k];
                const Real phase = -2.0 * (x * alpha.imag() - y * alpha.real());
                out[k] += (chi * std::exp(Complex(0.0, phase))).real();
            }
        }
    }
    for (auto& v : out) v *= h * h / (kPi * kPi);
    return out;
}

DensityMatrix squeezed_vacuum(Real r, int cutoff) {
    const int big = 4 * cutoff;
    const OperatorSet ops(FockSpace{big});
    const CMatrix a = CMatrix(ops.annihilate);
    const CMatrix gen = 0.5 * r * (a * a - a.adjoint() * a.adjoint());
    const CMatrix s = gen.exp();
    CVector psi = s.col(0).head(cutoff);
    return DensityMatrix::pure(psi / psi.norm());
}

}  // namespace

TEST(QuadratureMoments, Vacuum) {
    const OperatorSet ops{FockSpace(10)};
    const auto m = quadrature_moments(thermal_state(0.0, ops.space), ops);
    EXPECT_NEAR(m.mean.norm(), 0.0, 1e-15);
    EXPECT_NEAR(m.var_x1, 1.0, 1e-15);
    EXPECT_NEAR(m.var_x2, 1.0, 1e-15);
    EXPECT_NEAR(m.cov, 0.0, 1e-15);
}

TEST(QuadratureMoments, Thermal) {
    const OperatorSet ops{FockSpace(80)};
    const auto m = quadrature_moments(thermal_state(1.5, ops.space), ops);
    EXPECT_NEAR(m.var_x1, 4.0, 1e-9);
    EXPECT_NEAR(m.var_x2, 4.0, 1e-9);
    EXPECT_NEAR(m.cov, 0.0, 1e-12);
}

TEST(QuadratureMoments, OnePhonon) {
    const OperatorSet ops{FockSpace(5)};
    CMatrix one = CMatrix::Zero(5, 5);
    one(1, 1) = 1.0;
    const auto m = quadrature_moments(DensityMatrix::from_matrix(one), ops);
    EXPECT_NEAR(m.var_x1, 3.0, 1e-14);
    EXPECT_NEAR(m.var_x2, 3.0, 1e-14);
    EXPECT_NEAR(m.cov, 0.0, 1e-14);
}

TEST(QuadratureMoments, CoherentStateMean) {
    const OperatorSet ops{FockSpace(40)};
    const auto m = quadrature_moments(DensityMatrix::pure(oracle::coherent(Complex(0.5, -1.0), 40)), ops);
    EXPECT_NEAR(m.mean(0), 1.0, 1e-12);
    EXPECT_NEAR(m.mean(1), -2.0, 1e-12);
    EXPECT_NEAR(m.var_x1, 1.0, 1e-12);
}

TEST(QuadratureMoments, JointStateIsPartialTraced) {
    const FockSpace s(30);
    const OperatorSet ops(s);
    const auto joint = joint_state(kQubitGround, thermal_state(0.5, s), s);
    EXPECT_NEAR(quadrature_moments(joint, ops).var_x1, 2.0, 1e-9);
    EXPECT_NEAR(QuadratureProbe(s).moments(joint.matrix()).var_x2, 2.0, 1e-9);
    EXPECT_THROW(quadrature_moments(thermal_state(0.0, FockSpace(7)), ops), DimensionMismatch);
}

TEST(QuadratureMoments, SqueezedVacuum) {
    const OperatorSet ops{FockSpace(40)};
    const auto m = quadrature_moments(squeezed_vacuum(0.4, 40), ops);
    EXPECT_NEAR(m.var_x1, std::exp(-0.8), 1e-9);
    EXPECT_NEAR(m.var_x2, std::exp(0.8), 1e-9);
}

TEST(Purity, Examples) {
    EXPECT_NEAR(purity(DensityMatrix::pure(oracle::coherent(Complex(1.0, 0.3), 30))), 1.0, 1e-14);
    for (Real n : {0.0, 0.3, 1.0, 3.0}) EXPECT_NEAR(purity(thermal_state(n, FockSpace(120))), 1.0 / (1.0 + 2.0 * n), 1e-9);
}

TEST(GaussianDuality, EffectiveEvolutionAgreesInBothRepresentations) {
    const SystemParams p{0.1, 8.0, 1.0, 0.1, 0.2};
    // The anti-squeezed quadrature fattens the number distribution; 1e-6 needs a wide space.
    const FockSpace s(80);
    const auto fock = evolve(thermal_state(0.2, s), build_frozen_qubit_hamiltonian(p, s, 1), p, s, 12.0,
                             {default_fock_step(p), 0.0});
    const auto dd = build_drift_diffusion(p, build_effective_hamiltonian_matrix(p));
    const auto gauss = evolve_moments(GaussianState::thermal(0.2), dd, 12.0, {default_moment_step(p), 0.0});
    const OperatorSet ops(s);
    const auto m = quadrature_moments(fock.back().rho, ops);
    const auto& g = gauss.back().state;
    EXPECT_NEAR(m.var_x1, g.var_x1(), 1e-6);
    EXPECT_NEAR(m.var_x2, g.var_x2(), 1e-6);
    EXPECT_NEAR(m.cov, g.covariance(), 1e-6);
    EXPECT_NEAR(purity(fock.back().rho), g.purity(), 1e-6);
    EXPECT_NEAR(purity(fock.back().rho), 1.0 / std::sqrt(m.covariance_matrix().determinant()), 1e-6);
}

TEST(Conversions, ToDb) {
    EXPECT_DOUBLE_EQ(to_db(1.0), 0.0);
    EXPECT_NEAR(to_db(0.6), -2.218, 5e-4);
    EXPECT_NEAR(to_db(0.80488), -0.943, 5e-4);
    EXPECT_THROW(to_db(0.0), InvalidArgument);
    EXPECT_THROW(to_db(-1.0), InvalidArgument);
}

TEST(Conversions, Renormalize) {
    EXPECT_DOUBLE_EQ(renormalize(7.0, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(renormalize(0.6, 0.0), 0.6);
    EXPECT_NEAR(renormalize(4.2, 3.0), 0.6, 1e-15);
    for (Real v : {0.3, 1.0, 4.2, 17.0}) {
        for (Real n : {0.0, 0.2, 3.0}) {
            EXPECT_NEAR(to_db(renormalize(v, n)), to_db(v) - 10.0 * std::log10(1.0 + 2.0 * n), 1e-13);
        }
    }
}

TEST(Wigner, ClosedFormOracleIsItselfCorrect) {
    // Check the Laguerre elements against a matrix exponential.
    const int big = 80;
    const OperatorSet ops(FockSpace{big});
    const CMatrix a = CMatrix(ops.annihilate);
    const Complex alpha(0.7, -0.4);
    const CMatrix d = (alpha * a.adjoint() - std::conj(alpha) * a).exp();
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) EXPECT_LT(std::abs(d(m, n) - displacement_element(m, n, alpha)), 1e-12);
}

TEST(Wigner, MatchesDirectQuadratureOfCharacteristicFunction) {
    CVector psi(3);
    psi << 1.0, Complex(0.0, 0.6), 0.3;
    psi /= psi.norm();
    CMatrix rho = 0.7 * psi * psi.adjoint();
    rho(1, 1) += 0.3;
    const FockSpace s(3);
    const std::vector<std::pair<Real, Real>> points = {{0.0, 0.0}, {0.4, -0.2}, {-0.7, 0.5}, {1.1, 0.9}};
    const auto expected = brute_force_wigner(rho, points);
    for (size_t k = 0; k < points.size(); ++k) {
        const std::vector<Real> xs{points[k].first}, ys{points[k].second};
        const auto grid = wigner_grid(DensityMatrix::from_matrix(rho), s, xs, ys);
        EXPECT_NEAR(grid.values(0, 0), expected[k], 1e-8) << "point " << k;
    }
}

TEST(Wigner, VacuumClosedForm) {
    const FockSpace s(20);
    const auto xs = linspace(-2, 2, 21), ys = linspace(-1.5, 1.5, 11);
    const auto grid = wigner_grid(thermal_state(0.0, s), s, xs, ys);
    EXPECT_NEAR(grid.at_origin(), 2.0 / kPi, 1e-12);
    for (size_t i = 0; i < ys.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j)
            EXPECT_NEAR(grid.values(i, j), 2.0 / kPi * std::exp(-2.0 * (xs[j] * xs[j] + ys[i] * ys[i])), 1e-12);
}

TEST(Wigner, ThermalOrigin) {
    for (Real n : {0.5, 2.0}) {
        const FockSpace s(default_cutoff(n));
        const std::vector<Real> zero{0.0};
        EXPECT_NEAR(wigner_grid(thermal_state(n, s), s, zero, zero).at_origin(), 2.0 / (kPi * (1.0 + 2.0 * n)), 1e-9);
    }
}

TEST(Wigner, NormalizationAndMarginal) {
    const FockSpace s(40);
    const auto rho = squeezed_vacuum(0.3, 40);
    const auto xs = linspace(-4, 4, 81), ys = linspace(-4, 4, 81);
    const auto grid = wigner_grid(rho, s, xs, ys);
    EXPECT_NEAR(grid.integral(), 1.0, 1e-3);
    const auto m = quadrature_moments(rho, OperatorSet(s));
    EXPECT_NEAR(4.0 * grid.marginal_x_variance(), m.var_x1, 0.01 * m.var_x1);
    EXPECT_NEAR(4.0 * grid.marginal_y_variance(), m.var_x2, 0.01 * m.var_x2);
    // Squeezed along x1: narrower marginal in x.
    EXPECT_LT(grid.marginal_x_variance(), grid.marginal_y_variance());
}

TEST(Wigner, JointStatesArePartialTraced) {
    const FockSpace s(10);
    const std::vector<Real> zero{0.0};
    const auto joint = joint_state(kQubitGround, thermal_state(0.0, s), s);
    EXPECT_NEAR(wigner_grid(joint, s, zero, zero).at_origin(), 2.0 / kPi, 1e-12);
}

TEST(Wigner, NormCheckRejectsExcess) {
    const FockSpace s(20);
    const std::vector<Real> origin{0.0};
    WignerOptions opt;
    opt.norm_tol = -1e-3;  // at zero displacement every column has norm exactly 1
    EXPECT_THROW(wigner_grid(thermal_state(0.0, s), s, origin, origin, opt), CutoffError);
    opt.norm_tol = 1e-12;
    EXPECT_NO_THROW(wigner_grid(thermal_state(0.0, s), s, origin, origin, opt));
}

TEST(Wigner, LargeGridsStayResolved) {
    const FockSpace s(40);
    const auto xs = linspace(-4, 4, 9);
    const auto grid = wigner_grid(thermal_state(0.0, s), s, xs, xs);
    EXPECT_NEAR(grid.values(0, 0), 2.0 / kPi * std::exp(-64.0), 1e-15);
}

TEST(Wigner, CoherentStateFarFromOriginInWideSpace) {
    // W = (2/pi) exp(-2 |z - alpha|^2) in amplitude coordinates z = <x1>/2 + i <x2>/2.
    const int n = 120;
    const FockSpace s(n);
    const Complex alpha(3.0, -1.5);
    const auto rho = DensityMatrix::pure(oracle::coherent(alpha, n));
    const auto xs = linspace(-4, 4, 17), ys = linspace(-4, 4, 17);
    const auto grid = wigner_grid(rho, s, xs, ys);
    Real worst = 0.0;
    for (size_t i = 0; i < ys.size(); ++i) {
        for (size_t j = 0; j < xs.size(); ++j) {
            const Real expected = 2.0 / kPi * std::exp(-2.0 * std::norm(Complex(xs[j], ys[i]) - alpha));
            worst = std::max(worst, std::abs(grid.values(i, j) - expected));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Linspace, Endpoints) {
    const auto v = linspace(-1.0, 1.0, 5);
    EXPECT_EQ(v, (std::vector<Real>{-1.0, -0.5, 0.0, 0.5, 1.0}));
    EXPECT_THROW(linspace(0, 1, 0), InvalidArgument);
}
