#include "mechsq/core_model.hpp"

#include <cmath>
#include <sstream>

namespace mechsq {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw InvalidArgument(message);
}

void require_finite(const SystemParams& p) {
    const std::pair<const char*, Real> fields[] = {
        {"omega_m", p.omega_m}, {"omega_a", p.omega_a}, {"g", p.g}, {"gamma", p.gamma}, {"n_th", p.n_th}};
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value)) throw InvalidArgument(std::string(name) + " must be finite");
    }
}

// 16 g^2 w_m + w_a (gamma^2 + 4 w_m^2); shared denominator of var_x1 and cov.
Real squeeze_denominator(const SystemParams& p) {
    return 16.0 * p.g * p.g * p.omega_m + p.omega_a * (p.gamma * p.gamma + 4.0 * p.omega_m * p.omega_m);
}

void require_dissipation(const SystemParams& p) {
    if (!(p.gamma > 0.0)) throw NoSteadyState("no dissipative steady state (gamma must be positive)");
}

}  // namespace

ValidatedParams validate(const SystemParams& params) {
    require_finite(params);
    require(params.omega_m > 0.0, "omega_m must be positive");
    require(params.omega_a > 0.0, "omega_a must be positive");
    require(params.g >= 0.0, "g must be non-negative");
    require(params.gamma >= 0.0, "gamma must be non-negative");
    require(params.n_th >= 0.0, "n_th must be non-negative");

    ValidatedParams out{params, false, {}};
    if (params.detuning() <= kLargeDetuningRatio * params.g) {
        out.large_detuning_advisory = true;
        std::ostringstream msg;
        msg << "detuning omega_a - omega_m = " << params.detuning() << " is not large compared with g = " << params.g
            << "; the effective quadratic model may be inaccurate";
        out.advisories.push_back(msg.str());
    }
    return out;
}

SteadyStateMoments steady_state_moments(const SystemParams& params) {
    validate(params);
    require_dissipation(params);

    const Real thermal = 1.0 + 2.0 * params.n_th;
    const Real g2 = params.g * params.g;
    const Real wm = params.omega_m;
    const Real wa = params.omega_a;
    const Real den = squeeze_denominator(params);

    SteadyStateMoments m;
    m.var_x1 = thermal * (1.0 - 8.0 * g2 * wm / den);
    m.var_x2 = thermal * (1.0 + (32.0 * g2 * g2 + 8.0 * g2 * wa * wm) / (wa * den));
    m.cov_x1x2 = -4.0 * g2 * params.gamma * thermal / den;
    return m;
}

Real renormalized_variance(const SystemParams& params) {
    validate(params);
    require_dissipation(params);
    return 1.0 - 8.0 * params.g * params.g * params.omega_m / squeeze_denominator(params);
}

}  // namespace mechsq
