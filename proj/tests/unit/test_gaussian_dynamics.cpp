#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "mechsq/core_model.hpp"
#include "mechsq/gaussian_dynamics.hpp"

using namespace mechsq;

namespace {

const SystemParams kWorkingPoint{0.1, 8.0, 1.0, 0.1, 0.0};

void expect_mat_near(const Mat2& a, const Mat2& b, Real tol) {
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(a(i, j), b(i, j), tol) << "entry " << i << "," << j;
    }
}

Mat2 diag(Real a, Real b) { return (Mat2() << a, 0, 0, b).finished(); }

}  // namespace

TEST(EffectiveHamiltonian, Examples) {
    expect_mat_near(build_effective_hamiltonian_matrix({0.1, 8.0, 0.0, 0.1, 0.0}), diag(0.05, 0.05), 1e-15);
    expect_mat_near(build_effective_hamiltonian_matrix(kWorkingPoint), diag(0.30, 0.05), 1e-15);
    expect_mat_near(build_effective_hamiltonian_matrix(kWorkingPoint, QubitSign::ground), diag(-0.20, 0.05), 1e-15);
}

TEST(DriftDiffusion, FreeDampedOscillator) {
    const SystemParams p{0.1, 8.0, 0.0, 0.1, 0.0};
    const auto dd = build_drift_diffusion(p, build_effective_hamiltonian_matrix(p));
    expect_mat_near(dd.drift, (Mat2() << -0.05, 0.1, -0.1, -0.05).finished(), 1e-15);
    expect_mat_near(dd.diffusion, diag(0.1, 0.1), 1e-15);
}

TEST(DriftDiffusion, UndampedZeroHamiltonian) {
    const SystemParams p{0.1, 8.0, 1.0, 0.0, 2.0};
    const auto dd = build_drift_diffusion(p, Mat2::Zero());
    expect_mat_near(dd.drift, Mat2::Zero(), 0.0);
    expect_mat_near(dd.diffusion, Mat2::Zero(), 0.0);
}

TEST(DriftDiffusion, ThermalDiffusion) {
    const auto dd = build_drift_diffusion({0.1, 8.0, 1.0, 0.1, 3.0}, Mat2::Identity());
    expect_mat_near(dd.diffusion, diag(0.7, 0.7), 1e-15);
}

TEST(DriftDiffusion, RejectsAsymmetricHamiltonian) {
    EXPECT_THROW(build_drift_diffusion(kWorkingPoint, (Mat2() << 1, 2, 0, 1).finished()), InvalidArgument);
}

TEST(EvolveMoments, VacuumIsFixedPointWithoutCoupling) {
    const SystemParams p{0.1, 8.0, 0.0, 0.1, 0.0};
    const auto dd = build_drift_diffusion(p, build_effective_hamiltonian_matrix(p));
    const auto traj = evolve_moments(GaussianState::vacuum(), dd, 50.0, {0.01, 1.0});
    ASSERT_EQ(traj.size(), 51u);
    for (const auto& s : traj) {
        expect_mat_near(s.state.cov, Mat2::Identity(), 1e-12);
        EXPECT_NEAR(s.state.mean.norm(), 0.0, 1e-15);
    }
}

TEST(EvolveMoments, ThermalIsFixedPointWithoutCoupling) {
    const SystemParams p{0.1, 8.0, 0.0, 0.1, 3.0};
    const auto dd = build_drift_diffusion(p, build_effective_hamiltonian_matrix(p));
    const auto traj = evolve_moments(GaussianState::thermal(3.0), dd, 30.0, {0.01, 5.0});
    for (const auto& s : traj) expect_mat_near(s.state.cov, 7.0 * Mat2::Identity(), 1e-11);
}

TEST(EvolveMoments, ConvergesToClosedFormAtFig1Point) {
    const SystemParams p{0.1, 15.0, 1.0, 0.1, 0.0};
    const auto dd = build_drift_diffusion(p, build_effective_hamiltonian_matrix(p));
    const auto traj = evolve_moments(GaussianState::vacuum(), dd, 400.0, {default_moment_step(p), 50.0});
    EXPECT_NEAR(traj.back().state.var_x1(), 1.0 - 0.8 / 2.35, 1e-6);
    const auto lyap = solve_lyapunov_steady(dd);
    expect_mat_near(traj.back().state.cov, lyap.cov, 1e-6);
}

TEST(EvolveMoments, SamplesIncludeStartAndEnd) {
    const auto dd = build_drift_diffusion(kWorkingPoint, build_effective_hamiltonian_matrix(kWorkingPoint));
    const auto traj = evolve_moments(GaussianState::vacuum(), dd, 2.25, {0.01, 1.0});
    ASSERT_EQ(traj.size(), 4u);
    EXPECT_DOUBLE_EQ(traj[0].t, 0.0);
    EXPECT_DOUBLE_EQ(traj[1].t, 1.0);
    EXPECT_DOUBLE_EQ(traj[2].t, 2.0);
    EXPECT_DOUBLE_EQ(traj[3].t, 2.25);
}

TEST(EvolveMoments, MeanFollowsMatrixExponential) {
    const auto dd = build_drift_diffusion(kWorkingPoint, build_effective_hamiltonian_matrix(kWorkingPoint));
    GaussianState s;
    s.mean << 1.5, -0.5;
    const auto traj = evolve_moments(s, dd, 10.0, {0.005, 0.0});
    // Oracle: diagonalize the drift.
    Eigen::EigenSolver<Mat2> es(dd.drift);
    const Eigen::Vector2cd lambda = es.eigenvalues();
    const Eigen::Matrix2cd v = es.eigenvectors();
    const Eigen::Matrix2cd expA = v * (lambda * 10.0).array().exp().matrix().asDiagonal() * v.inverse();
    const Eigen::Vector2cd expected = expA * s.mean.cast<Complex>();
    EXPECT_NEAR(traj.back().state.mean(0), expected(0).real(), 1e-10);
    EXPECT_NEAR(traj.back().state.mean(1), expected(1).real(), 1e-10);
}

TEST(EvolveMoments, StaysPhysical) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<Real> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const SystemParams p{0.05 + u(rng), 2.0 + 20.0 * u(rng), 2.0 * u(rng), 0.05 + u(rng), 2.0 * u(rng)};
        const auto dd = build_drift_diffusion(p, build_effective_hamiltonian_matrix(p));
        const auto traj = evolve_moments(GaussianState::vacuum(), dd, 20.0, {default_moment_step(p), 0.5});
        for (const auto& s : traj) {
            EXPECT_GE(s.state.cov.determinant(), 1.0 - 1e-9);
            EXPECT_TRUE(s.state.is_physical());
        }
    }
}

TEST(EvolveMoments, RejectsCoarseStep) {
    const auto dd = build_drift_diffusion(kWorkingPoint, build_effective_hamiltonian_matrix(kWorkingPoint));
    EXPECT_THROW(evolve_moments(GaussianState::vacuum(), dd, 10.0, {1.0, 0.0}), StepSizeError);
    EXPECT_THROW(evolve_moments(GaussianState::vacuum(), dd, 10.0, {0.0, 0.0}), InvalidArgument);
}

TEST(Lyapunov, IsotropicDecay) {
    DriftDiffusion dd{-0.05 * Mat2::Identity(), 0.1 * 5.0 * Mat2::Identity()};
    const auto s = solve_lyapunov_steady(dd);
    expect_mat_near(s.cov, 5.0 * Mat2::Identity(), 1e-14);
    EXPECT_TRUE(s.physical);
}

TEST(Lyapunov, WorkingPointMatchesClosedForm) {
    const auto s = solve_lyapunov_steady(
        build_drift_diffusion(kWorkingPoint, build_effective_hamiltonian_matrix(kWorkingPoint)));
    expect_mat_near(s.cov, (Mat2() << 0.6, -0.2, -0.2, 3.4).finished(), 1e-12);
}

TEST(Lyapunov, ZeroDiffusionIsFlaggedUnphysical) {
    DriftDiffusion dd{(Mat2() << -0.05, 0.1, -0.1, -0.05).finished(), Mat2::Zero()};
    const auto s = solve_lyapunov_steady(dd);
    expect_mat_near(s.cov, Mat2::Zero(), 1e-15);
    EXPECT_FALSE(s.physical);
}

TEST(Lyapunov, RejectsNonHurwitzDrift) {
    const SystemParams p{0.1, 8.0, 0.0, 0.0, 0.0};
    EXPECT_THROW(solve_lyapunov_steady(build_drift_diffusion(p, build_effective_hamiltonian_matrix(p))), NoSteadyState);
}

TEST(Stability, Examples) {
    const SystemParams damped{0.1, 8.0, 1.0, 0.1, 0.0};
    EXPECT_TRUE(is_stable(build_drift_diffusion(damped, build_effective_hamiltonian_matrix(damped))));
    // Qubit in |g>: inverted x1^2 term outruns the damping.
    EXPECT_FALSE(is_stable(build_drift_diffusion(damped, build_effective_hamiltonian_matrix(damped, QubitSign::ground))));
    const SystemParams free{0.1, 8.0, 0.0, 0.0, 0.0};
    EXPECT_FALSE(is_stable(build_drift_diffusion(free, build_effective_hamiltonian_matrix(free))));
    const SystemParams undamped{0.1, 8.0, 1.0, 0.0, 0.0};
    EXPECT_FALSE(is_stable(build_drift_diffusion(undamped, build_effective_hamiltonian_matrix(undamped, QubitSign::ground))));
}

TEST(Stability, AnyDampingWithPositiveHamiltonian) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<Real> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const SystemParams p{0.01 + u(rng), 0.5 + 50 * u(rng), 3 * u(rng), 1e-3 + u(rng), 3 * u(rng)};
        EXPECT_TRUE(is_stable(build_drift_diffusion(p, build_effective_hamiltonian_matrix(p))));
    }
}

TEST(GaussianState, PurityAndPhysicality) {
    EXPECT_DOUBLE_EQ(GaussianState::vacuum().purity(), 1.0);
    EXPECT_NEAR(GaussianState::thermal(2.0).purity(), 0.2, 1e-15);
    GaussianState bad;
    bad.cov = diag(0.5, 1.0);
    EXPECT_FALSE(bad.is_physical());
}
