#pragma once

#include <span>
#include <vector>

#include "mechsq/fock_space.hpp"
#include "mechsq/gaussian_dynamics.hpp"
#include "mechsq/types.hpp"

namespace mechsq {

struct QuadratureMoments {
    Vec2 mean = Vec2::Zero();
    Real var_x1 = 1.0;
    Real var_x2 = 1.0;
    Real cov = 0.0;  ///< <{x1, x2}>/2 - <x1><x2>

    [[nodiscard]] Mat2 covariance_matrix() const { return (Mat2() << var_x1, cov, cov, var_x2).finished(); }
};

/// Precomputed oscillator quadrature operators for repeated moment
/// evaluation on one FockSpace.
class QuadratureProbe {
public:
    explicit QuadratureProbe(const FockSpace& space);

    /// Joint states are partial-traced over the qubit first.
    [[nodiscard]] QuadratureMoments moments(const CMatrix& rho) const;
    [[nodiscard]] const FockSpace& space() const noexcept { return space_; }

private:
    FockSpace space_;
    CMatrix x1_t_, x2_t_, x1sq_t_, x2sq_t_, anti_t_;  // transposed for Tr(rho X) = sum(rho .* X^T)
};

QuadratureMoments quadrature_moments(const DensityMatrix& rho, const OperatorSet& ops);

/// Tr[rho^2].
Real purity(const DensityMatrix& rho);
Real purity(const CMatrix& rho);

/// Wigner function W(x, y) with alpha = x + i y, normalized so the vacuum is
/// (2/pi) exp(-2 (x^2 + y^2)). values(i, j) is W(xs[j], ys[i]), i.e. rows
/// run along y.
struct WignerGrid {
    std::vector<Real> xs;
    std::vector<Real> ys;
    Eigen::MatrixXd values;

    /// Riemann sum of W dx dy (uniform grids).
    [[nodiscard]] Real integral() const;
    /// Marginal over y, sampled on xs.
    [[nodiscard]] std::vector<Real> marginal_x() const;
    /// Variance of the x coordinate of the marginal. Var(x1) = 4 * this.
    [[nodiscard]] Real marginal_x_variance() const;
    [[nodiscard]] Real marginal_y_variance() const;
    /// Value nearest to the origin.
    [[nodiscard]] Real at_origin() const;
};

struct WignerOptions {
    /// Allowed excess over 1 of any column norm of the displacement block at the grid edge.
    Real norm_tol = 1e-8;
};

/// Wigner function of an oscillator state via the displaced-parity identity
/// W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dag] = (2/pi) Tr[rho D(2 alpha) P].
/// Joint states are partial-traced first. Throws CutoffError when the
/// displacement block at the grid edge fails its norm check.
WignerGrid wigner_grid(const DensityMatrix& rho, const FockSpace& space, std::span<const Real> xs,
                       std::span<const Real> ys, const WignerOptions& options = {});

/// n equally spaced points spanning [lo, hi].
std::vector<Real> linspace(Real lo, Real hi, int n);

/// 10 log10(variance); throws InvalidArgument for non-positive input.
Real to_db(Real variance);

/// variance / (1 + 2 n_th).
Real renormalize(Real variance, Real n_th);

}  // namespace mechsq
