#include "rqt/coherence.hpp"

#include <cmath>
#include <limits>

namespace rqt {

EnvironmentModel EnvironmentModel::exponential(double tau_c_s, double phase) {
    EnvironmentModel e;
    e.mode = CoherenceMode::exponential;
    e.tau_c = tau_c_s;
    e.env_phase = phase;
    e.validate();
    return e;
}

EnvironmentModel EnvironmentModel::fixed(double alpha_value, double phase) {
    EnvironmentModel e;
    e.mode = CoherenceMode::fixed;
    e.alpha_fixed = alpha_value;
    e.env_phase = phase;
    e.validate();
    return e;
}

EnvironmentModel EnvironmentModel::coherent(double phase) {
    EnvironmentModel e;
    e.mode = CoherenceMode::coherent;
    e.env_phase = phase;
    return e;
}

EnvironmentModel EnvironmentModel::decoherent(double phase) {
    EnvironmentModel e;
    e.mode = CoherenceMode::decoherent;
    e.env_phase = phase;
    return e;
}

void EnvironmentModel::validate() const {
    switch (mode) {
        case CoherenceMode::exponential:
            if (!(tau_c > 0.0)) {
                throw DomainError("EnvironmentModel: tau_c must be > 0");
            }
            break;
        case CoherenceMode::fixed:
            if (!(alpha_fixed >= 0.0 && alpha_fixed <= 1.0)) {
                throw DomainError("EnvironmentModel: fixed alpha must lie in [0, 1]");
            }
            break;
        default:
            break;
    }
}

double alpha(const EnvironmentModel& env, double t) {
    if (t < 0.0) {
        throw DomainError("alpha: t must be >= 0");
    }
    env.validate();
    switch (env.mode) {
        case CoherenceMode::exponential:
            return std::exp(-t / env.tau_c);
        case CoherenceMode::fixed:
            return env.alpha_fixed;
        case CoherenceMode::coherent:
            return 1.0;
        case CoherenceMode::decoherent:
            return 0.0;
    }
    return 0.0;  // unreachable
}

double coherence_degree(double alpha_value) {
    if (!(alpha_value >= 0.0 && alpha_value <= 1.0)) {
        throw DomainError("coherence_degree: alpha must lie in [0, 1]");
    }
    return 2.0 * alpha_value / (1.0 + alpha_value * alpha_value);
}

double tau_from_visibility(double lambda_meas, double t_f) {
    if (!(lambda_meas > 0.0 && lambda_meas <= 1.0)) {
        throw DomainError("tau_from_visibility: Lambda must lie in (0, 1]");
    }
    if (!(t_f > 0.0)) {
        throw DomainError("tau_from_visibility: t_f must be > 0");
    }
    if (lambda_meas == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double arcsech =
        std::log((1.0 + std::sqrt(1.0 - lambda_meas * lambda_meas)) / lambda_meas);
    return t_f / arcsech;
}

}  // namespace rqt
