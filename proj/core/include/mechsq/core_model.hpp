#pragma once

#include <string>
#include <vector>

#include "mechsq/types.hpp"

namespace mechsq {

/// Physical parameters of the qubit-oscillator model, in units with hbar = 1.
/// Frequencies are conventionally expressed in units of the coupling g.
///
/// The bath occupation n_th also sets the oscillator's initial thermal
/// occupation. If a temperature is known instead, n_th = 1 / (exp(beta*omega_m) - 1).
struct SystemParams {
    Real omega_m = 0.1;  ///< oscillator angular frequency
    Real omega_a = 8.0;  ///< qubit transition frequency
    Real g = 1.0;        ///< qubit-oscillator coupling
    Real gamma = 0.1;    ///< oscillator-bath coupling rate
    Real n_th = 0.0;     ///< mean thermal phonon number of the bath

    [[nodiscard]] Real detuning() const noexcept { return omega_a - omega_m; }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Detuning-to-coupling ratio at or below which the effective quadratic model
/// is flagged as doubtful. Heuristic; never blocks a run.
inline constexpr Real kLargeDetuningRatio = 5.0;

struct ValidatedParams {
    SystemParams params;
    /// Set when detuning <= kLargeDetuningRatio * g.
    bool large_detuning_advisory = false;
    std::vector<std::string> advisories;
};

/// Checks the parameter ranges. Throws InvalidArgument naming the offending
/// field; attaches a non-fatal advisory when the detuning is small.
ValidatedParams validate(const SystemParams& params);

/// Quadrature variances and symmetrized covariance (vacuum variance = 1).
struct SteadyStateMoments {
    Real var_x1 = 1.0;
    Real var_x2 = 1.0;
    Real cov_x1x2 = 0.0;

    /// var_x1 * var_x2 - cov^2; at least 1 for a physical state.
    [[nodiscard]] Real determinant() const noexcept { return var_x1 * var_x2 - cov_x1x2 * cov_x1x2; }
};

/// Closed-form steady state of the effective model with the qubit held in |e>.
/// Throws NoSteadyState when gamma == 0.
SteadyStateMoments steady_state_moments(const SystemParams& params);

/// var_x1 / (1 + 2 n_th) at steady state. Independent of n_th and < 1 for g > 0.
Real renormalized_variance(const SystemParams& params);

}  // namespace mechsq
