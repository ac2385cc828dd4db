#pragma once

#include "rqt/errors.hpp"

namespace rqt {

/// How the environment-overlap scalar alpha_t evolves.
enum class CoherenceMode {
    exponential,  ///< alpha_t = exp(-t / tau_c)
    fixed,        ///< alpha_t = const in [0, 1]
    coherent,     ///< alpha_t = 1 (environment never learns the path)
    decoherent,   ///< alpha_t = 0 (full which-way record)
};

/// Scalar environment model: the overlap magnitude alpha_t of the two
/// environment branches plus a constant relative phase. All decoherence
/// physics of the simulation enters through these two numbers.
struct EnvironmentModel {
    CoherenceMode mode = CoherenceMode::coherent;
    double tau_c = 0.0;        ///< coherence time [s] (exponential mode)
    double alpha_fixed = 1.0;  ///< constant overlap (fixed mode)
    double env_phase = 0.0;    ///< relative phase of the environment branches [rad]

    static EnvironmentModel exponential(double tau_c_s, double phase = 0.0);
    static EnvironmentModel fixed(double alpha_value, double phase = 0.0);
    static EnvironmentModel coherent(double phase = 0.0);
    static EnvironmentModel decoherent(double phase = 0.0);

    /// Throws DomainError if the mode's parameter is out of range.
    void validate() const;
};

/// Overlap magnitude alpha at time t (>= 0, else DomainError); in [0, 1].
double alpha(const EnvironmentModel& env, double t);

/// Coherence degree Lambda = 2 alpha / (1 + alpha^2) -- the prefactor of the
/// interference cross term, and the fringe visibility where the two packet
/// envelopes coincide. Monotone increasing on alpha in [0, 1], range [0, 1].
/// Throws DomainError for alpha outside [0, 1].
double coherence_degree(double alpha_value);

/// Coherence time from a measured visibility at flight time t_f:
/// tau_c = t_f / arcsech(Lambda), arcsech(L) = ln[(1 + sqrt(1 - L^2)) / L].
/// Lambda = 1 returns +infinity (total coherence). Throws DomainError for
/// Lambda <= 0 or > 1, or t_f <= 0.
double tau_from_visibility(double lambda_meas, double t_f);

}  // namespace rqt
