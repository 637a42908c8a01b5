#include "mechsq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mechsq {

namespace {

Real trace_product(const CMatrix& rho, const CMatrix& op_transposed) {
    return rho.cwiseProduct(op_transposed).sum().real();
}

Real spacing(const std::vector<Real>& v) {
    return v.size() > 1 ? (v.back() - v.front()) / static_cast<Real>(v.size() - 1) : 1.0;
}

// Block <k|D(beta)|m>, k, m < n. Along each diagonal k - m = d the entries are
// sqrt(m!/(m+d)!) beta^d e^{-|beta|^2/2} L_m^(d)(|beta|^2); the three-term
// Laguerre recurrence in m is stable where column-by-column raising is not.
// A running log scale keeps intermediates finite for large |beta|.
CMatrix displacement_block(Complex beta, int n) {
    CMatrix d(n, n);
    const Real x = std::norm(beta);
    const Real r = std::abs(beta);
    const Complex phase = r > 0.0 ? beta / r : Complex(1.0, 0.0);
    const Complex minus_conj_phase = -std::conj(phase);
    constexpr Real kRescale = 1e150;
    const Real log_rescale = std::log(kRescale);
    Complex below_phase(1.0, 0.0), above_phase(1.0, 0.0);
    for (int off = 0; off < n; ++off) {
        if (off > 0) {
            below_phase *= phase;
            above_phase *= minus_conj_phase;
        }
        if (r == 0.0 && off > 0) {
            for (int m = 0; m + off < n; ++m) d(m + off, m) = d(m, m + off) = 0.0;
            continue;
        }
        Real scale = (off > 0 ? off * std::log(r) : 0.0) - 0.5 * x - 0.5 * std::lgamma(off + 1.0);
        auto store = [&](int m, Real f) {
            const Real mag = std::abs(scale) < 700.0 ? std::exp(scale) * f
                             : (f == 0.0 ? 0.0 : std::copysign(std::exp(scale + std::log(std::abs(f))), f));
            d(m + off, m) = below_phase * mag;
            if (off > 0) d(m, m + off) = above_phase * mag;
        };
        Real f_prev = 0.0, f = 1.0;
        store(0, f);
        for (int m = 1; m + off < n; ++m) {
            const Real ratio = std::sqrt(m / static_cast<Real>(m + off));
            Real next;
            if (m == 1) {
                next = ratio * (1.0 + off - x);
            } else {
                const Real ratio_prev = std::sqrt((m - 1) / static_cast<Real>(m - 1 + off));
                next = ((2.0 * m - 1.0 + off - x) * ratio * f - (m - 1.0 + off) * ratio * ratio_prev * f_prev) / m;
            }
            f_prev = f;
            f = next;
            if (std::abs(f) > kRescale) {
                f /= kRescale;
                f_prev /= kRescale;
                scale += log_rescale;
            }
            store(m, f);
        }
    }
    return d;
}

}  // namespace

QuadratureProbe::QuadratureProbe(const FockSpace& space) : space_(space) {
    const OperatorSet ops(space);
    const CMatrix x1 = CMatrix(ops.x1);
    const CMatrix x2 = CMatrix(ops.x2);
    x1_t_ = x1.transpose();
    x2_t_ = x2.transpose();
    x1sq_t_ = (x1 * x1).transpose();
    x2sq_t_ = (x2 * x2).transpose();
    anti_t_ = (0.5 * (x1 * x2 + x2 * x1)).transpose();
}

QuadratureMoments QuadratureProbe::moments(const CMatrix& rho) const {
    const CMatrix osc = oscillator_reduced(rho, space_);
    QuadratureMoments m;
    m.mean << trace_product(osc, x1_t_), trace_product(osc, x2_t_);
    m.var_x1 = trace_product(osc, x1sq_t_) - m.mean(0) * m.mean(0);
    m.var_x2 = trace_product(osc, x2sq_t_) - m.mean(1) * m.mean(1);
    m.cov = trace_product(osc, anti_t_) - m.mean(0) * m.mean(1);
    return m;
}

QuadratureMoments quadrature_moments(const DensityMatrix& rho, const OperatorSet& ops) {
    return QuadratureProbe(ops.space).moments(rho.matrix());
}

Real purity(const CMatrix& rho) {
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    return rho.cwiseAbs2().sum();
}

Real purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

Real WignerGrid::integral() const { return values.sum() * spacing(xs) * spacing(ys); }

std::vector<Real> WignerGrid::marginal_x() const {
    std::vector<Real> out(xs.size());
    const Real dy = spacing(ys);
    for (size_t j = 0; j < xs.size(); ++j) out[j] = values.col(static_cast<Eigen::Index>(j)).sum() * dy;
    return out;
}

Real WignerGrid::marginal_x_variance() const {
    const auto p = marginal_x();
    Real norm = 0.0, first = 0.0, second = 0.0;
    for (size_t j = 0; j < xs.size(); ++j) {
        norm += p[j];
        first += xs[j] * p[j];
        second += xs[j] * xs[j] * p[j];
    }
    first /= norm;
    return second / norm - first * first;
}

Real WignerGrid::marginal_y_variance() const {
    Real norm = 0.0, first = 0.0, second = 0.0;
    for (size_t i = 0; i < ys.size(); ++i) {
        const Real p = values.row(static_cast<Eigen::Index>(i)).sum();
        norm += p;
        first += ys[i] * p;
        second += ys[i] * ys[i] * p;
    }
    first /= norm;
    return second / norm - first * first;
}

Real WignerGrid::at_origin() const {
    auto nearest = [](const std::vector<Real>& v) {
        return std::distance(v.begin(), std::min_element(v.begin(), v.end(), [](Real a, Real b) {
                                 return std::abs(a) < std::abs(b);
                             }));
    };
    return values(nearest(ys), nearest(xs));
}

WignerGrid wigner_grid(const DensityMatrix& rho, const FockSpace& space, std::span<const Real> xs,
                       std::span<const Real> ys, const WignerOptions& options) {
    if (xs.empty() || ys.empty()) throw InvalidArgument("Wigner grid axes must be non-empty");
    const CMatrix osc = oscillator_reduced(rho.matrix(), space);
    const int n = space.cutoff();

    Real max_radius = 0.0;
    for (Real x : xs) {
        for (Real y : ys) max_radius = std::max(max_radius, std::hypot(x, y));
    }
    {
        // The block of a unitary has columns of norm <= 1; anything above means
        // the displacement at the grid edge is not resolved numerically.
        const Real worst = displacement_block(Complex(2.0 * max_radius, 0.0), n).colwise().squaredNorm().maxCoeff();
        if (!(worst <= 1.0 + options.norm_tol)) {
            std::ostringstream msg;
            msg << "displacement |alpha| = " << max_radius << " at the grid edge is not resolved with cutoff " << n
                << " (column norm " << worst << ")";
            throw CutoffError(msg.str());
        }
    }

    // Tr[rho D(beta) P] = sum_{m,k} rho_{m,k} (-1)^m <k|D(beta)|m>
    CMatrix rho_parity = osc;
    for (int m = 1; m < n; m += 2) rho_parity.row(m) *= -1.0;
    const CMatrix rho_parity_t = rho_parity.transpose();

    WignerGrid grid;
    grid.xs.assign(xs.begin(), xs.end());
    grid.ys.assign(ys.begin(), ys.end());
    grid.values.resize(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(xs.size()));
    Real max_imag = 0.0;
    for (size_t i = 0; i < ys.size(); ++i) {
        for (size_t j = 0; j < xs.size(); ++j) {
            const CMatrix d = displacement_block(Complex(2.0 * xs[j], 2.0 * ys[i]), n);
            // sum_{m,k} rho_parity(m,k) d(k,m)
            const Complex w = (2.0 / kPi) * rho_parity_t.cwiseProduct(d).sum();
            max_imag = std::max(max_imag, std::abs(w.imag()));
            grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w.real();
        }
    }
    if (max_imag > 1e-10) {
        std::ostringstream msg;
        msg << "Wigner function has imaginary residue " << max_imag << "; state is not Hermitian";
        throw InvalidArgument(msg.str());
    }
    return grid;
}

std::vector<Real> linspace(Real lo, Real hi, int n) {
    if (n < 1) throw InvalidArgument("linspace needs at least one point");
    std::vector<Real> out(static_cast<size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const Real step = (hi - lo) / static_cast<Real>(n - 1);
    for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] = lo + step * static_cast<Real>(k);
    return out;
}

Real to_db(Real variance) {
    if (!(variance > 0.0)) throw InvalidArgument("variance must be positive to convert to dB");
    return 10.0 * std::log10(variance);
}

Real renormalize(Real variance, Real n_th) {
    if (!(n_th >= 0.0)) throw InvalidArgument("n_th must be non-negative");
    return variance / (1.0 + 2.0 * n_th);
}

}  // namespace mechsq
