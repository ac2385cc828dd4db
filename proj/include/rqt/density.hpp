#pragma once

#include "rqt/coherence.hpp"
#include "rqt/wavepacket.hpp"

namespace rqt {

/// Two partial waves with complex weights: the system side of the
/// path-entangled state. The environment side enters only through
/// EnvironmentModel.
struct SuperpositionState {
    GaussianPacket packet1;
    GaussianPacket packet2;
    Complex c1{1.0, 0.0};
    Complex c2{0.0, 0.0};

    /// Throws DomainError unless |c1|^2 + |c2|^2 = 1 within 1e-12 and both
    /// packets validate.
    void validate() const;
};

/// Per-time evaluation cache for the packet pair. Besides the two packet
/// frames it carries the small momentum differences from which the pairwise
/// phase difference is reconstructed without cancellation: the two absolute
/// optical phases reach ~1e10 rad at flight time, so subtracting them in
/// double precision would leave ~1e-5 rad of noise -- fatal for
/// finite-difference work on the cross term. The collapsed form
///   dtheta(x, z, t) = [dpx x + dpz z]/hbar - [d(px^2) + d(pz^2)] t/(2 m hbar)
/// uses only smooth, small differences.
struct PairFrame {
    PacketFrame f1;
    PacketFrame f2;
    double t = 0.0;
    double dpx = 0.0;          ///< px1 - px2
    double dpz = 0.0;          ///< pz1 - pz2
    double dp2_over_2m = 0.0;  ///< [(px1^2-px2^2) + (pz1^2-pz2^2)] / (2 m)
    double abs_c1 = 0.0;       ///< |c1|
    double abs_c2 = 0.0;       ///< |c2|
    double weight_phase = 0.0; ///< arg(c1 * conj(c2))
    double inv_hbar = 0.0;
    double hbar_over_m = 0.0;
};

/// Builds the pair cache at time t (>= 0, else DomainError).
PairFrame make_pair_frame(const SuperpositionState& state, double t);

/// Phase difference arg(psi1) - arg(psi2) at (x, z), optical + global parts,
/// computed by the collapsed difference formula (curvature and spreading
/// parts are added separately by the field evaluator).
double pair_phase_difference(const PairFrame& pf, double x, double z);

/// Pointwise density and current of the reduced state.
struct FieldValue {
    double rho = 0.0;  ///< rho-tilde [m^-2] (raw, integrates to 1 + alpha^2 + overlap term)
    double jx = 0.0;   ///< transverse current density [m^-2 m/s]
    double jz = 0.0;   ///< longitudinal current density
};

/// Core evaluator:
///   rho = (1 + alpha^2)(q1 + q2) + 4 Re[cross]
///   J   = (hbar/m) Im[(1 + alpha^2)(q1 L1 + q2 L2) + 2 cross L1 + 2 conj(cross) L2]
/// with q_j = |c_j psi_j|^2, L_j the log-gradients, and
/// cross = alpha e^{i delta'} c1 conj(c2) psi1 conj(psi2), evaluated as
/// sqrt(q1 q2) times a unit phasor of the collapsed phase difference.
FieldValue reduced_field(const PairFrame& pf, double alpha_value,
                         double env_phase, double x, double z);

/// Diagonal of the reduced density matrix -- the measured intensity
/// rho-tilde(x, z, t) >= 0. Uses alpha(env, t).
double reduced_intensity(const SuperpositionState& state,
                         const EnvironmentModel& env, double x, double z,
                         double t);

/// Fully coherent intensity |c1 psi1 + c2 psi2|^2, computed by summing the
/// amplitudes (an algebraically independent route from reduced_field; equals
/// reduced_intensity with alpha = 1 up to the global factor 2).
double coherent_intensity(const SuperpositionState& state, double x, double z,
                          double t);

/// Incoherent mixture |c1|^2 rho1 + |c2|^2 rho2 -- the full-decoherence
/// limit; equals reduced_intensity with alpha = 0.
double classical_intensity(const SuperpositionState& state, double x, double z,
                           double t);

/// Reduced current density (J_x, J_z); together with reduced_intensity it
/// satisfies the continuity equation for any constant alpha.
Vec2 reduced_current(const SuperpositionState& state,
                     const EnvironmentModel& env, double x, double z, double t);

/// Complex overlap <psi2|psi1> of the two packets at t = 0 (closed form; the
/// overlap is invariant under the free evolution).
Complex initial_overlap(const SuperpositionState& state);

}  // namespace rqt
