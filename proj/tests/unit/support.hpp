#pragma once

#include <cmath>
#include <random>

#include "mechsq/fock_space.hpp"

namespace mechsq::oracle {

/// Coherent state |alpha> truncated to n levels and renormalized.
inline CVector coherent(Complex alpha, int n) {
    CVector psi(n);
    Complex c = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k < n; ++k) {
        psi(k) = c;
        c *= alpha / std::sqrt(static_cast<Real>(k + 1));
    }
    return psi / psi.norm();
}

/// Random full-rank density matrix G G^dag / Tr.
inline CMatrix random_density(int dim, std::mt19937_64& rng) {
    std::normal_distribution<Real> n(0.0, 1.0);
    CMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace();
}

/// Textbook dense Lindblad right-hand side, oscillator factor last.
inline CMatrix dense_lindblad(const CMatrix& rho, const CMatrix& h, const CMatrix& a, Real gamma, Real n_th) {
    const Complex i(0.0, 1.0);
    const CMatrix ad = a.adjoint();
    auto dissipator = [&](const CMatrix& l) {
        const CMatrix ld = l.adjoint();
        return CMatrix(l * rho * ld - 0.5 * (ld * l * rho + rho * ld * l));
    };
    return -i * (h * rho - rho * h) + gamma * (n_th + 1.0) * dissipator(a) + gamma * n_th * dissipator(ad);
}

}  // namespace mechsq::oracle
