#include "rqt/density.hpp"

#include <cmath>

namespace rqt {

void SuperpositionState::validate() const {
    packet1.validate();
    packet2.validate();
    const double n = std::norm(c1) + std::norm(c2);
    if (std::abs(n - 1.0) > 1e-12) {
        throw DomainError("SuperpositionState: |c1|^2 + |c2|^2 must equal 1");
    }
}

PairFrame make_pair_frame(const SuperpositionState& state, double t) {
    PairFrame pf;
    pf.f1 = make_frame(state.packet1, t);
    pf.f2 = make_frame(state.packet2, t);
    pf.t = t;
    pf.dpx = state.packet1.px - state.packet2.px;
    pf.dpz = state.packet1.pz - state.packet2.pz;
    // Difference of squares via (a-b)(a+b): keeps the tiny difference exact.
    pf.dp2_over_2m = (pf.dpx * (state.packet1.px + state.packet2.px) +
                      pf.dpz * (state.packet1.pz + state.packet2.pz)) /
                     (2.0 * state.packet1.constants.mass);
    pf.abs_c1 = std::abs(state.c1);
    pf.abs_c2 = std::abs(state.c2);
    pf.weight_phase = (pf.abs_c1 > 0.0 && pf.abs_c2 > 0.0)
                          ? std::arg(state.c1 * std::conj(state.c2))
                          : 0.0;
    pf.inv_hbar = 1.0 / state.packet1.constants.hbar;
    pf.hbar_over_m =
        state.packet1.constants.hbar / state.packet1.constants.mass;
    return pf;
}

double pair_phase_difference(const PairFrame& pf, double x, double z) {
    // Optical-phase difference including the packets' global phases; the
    // initial-center term (px1 x01 - px2 x02 + ...) of the global phases
    // cancels against the moving-center part of the local phases, leaving
    // this two-term form (derivable by expanding p_j . (r - r_j(t)) / hbar
    // + global_j and collecting).
    return (pf.dpx * x + pf.dpz * z - pf.dp2_over_2m * pf.t) * pf.inv_hbar;
}

FieldValue reduced_field(const PairFrame& pf, double alpha_value,
                         double env_phase, double x, double z) {
    const double q1 = pf.abs_c1 * pf.abs_c1 * intensity(pf.f1, x, z);
    const double q2 = pf.abs_c2 * pf.abs_c2 * intensity(pf.f2, x, z);
    const double one_plus_a2 = 1.0 + alpha_value * alpha_value;

    const Complex l1x = log_gradient_x(pf.f1, x);
    const Complex l1z = log_gradient_z(pf.f1, z);
    const Complex l2x = log_gradient_x(pf.f2, x);
    const Complex l2z = log_gradient_z(pf.f2, z);

    // cross = alpha e^{i delta'} c1 conj(c2) psi1 conj(psi2)
    //       = alpha sqrt(q1 q2) e^{i Phi}; all phase pieces are O(1) or built
    // from small momentum differences, never from two large absolute phases.
    const double cross_mag = alpha_value * std::sqrt(q1 * q2);
    FieldValue out;
    if (cross_mag > 0.0) {
        const double phi = pair_phase_difference(pf, x, z) +
                           (curvature_phase(pf.f1, x, z) -
                            curvature_phase(pf.f2, x, z)) +
                           pf.weight_phase + env_phase;
        const Complex cross = std::polar(cross_mag, phi);
        out.rho = one_plus_a2 * (q1 + q2) + 4.0 * cross.real();
        out.jx = pf.hbar_over_m *
                 (one_plus_a2 * (q1 * l1x.imag() + q2 * l2x.imag()) +
                  2.0 * (cross * l1x).imag() + 2.0 * (std::conj(cross) * l2x).imag());
        out.jz = pf.hbar_over_m *
                 (one_plus_a2 * (q1 * l1z.imag() + q2 * l2z.imag()) +
                  2.0 * (cross * l1z).imag() + 2.0 * (std::conj(cross) * l2z).imag());
    } else {
        out.rho = one_plus_a2 * (q1 + q2);
        out.jx = pf.hbar_over_m * one_plus_a2 *
                 (q1 * l1x.imag() + q2 * l2x.imag());
        out.jz = pf.hbar_over_m * one_plus_a2 *
                 (q1 * l1z.imag() + q2 * l2z.imag());
    }
    return out;
}

double reduced_intensity(const SuperpositionState& state,
                         const EnvironmentModel& env, double x, double z,
                         double t) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    return reduced_field(pf, alpha(env, t), env.env_phase, x, z).rho;
}

double coherent_intensity(const SuperpositionState& state, double x, double z,
                          double t) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    // Split the pair phase difference symmetrically between the two waves;
    // the discarded common phase does not change |.|^2.
    const double half_dtheta = 0.5 * pair_phase_difference(pf, x, z);
    const double a1 =
        std::sqrt(pf.f1.norm2) * std::exp(log_envelope(pf.f1, x, z));
    const double a2 =
        std::sqrt(pf.f2.norm2) * std::exp(log_envelope(pf.f2, x, z));
    const Complex w1 =
        state.c1 * std::polar(a1, curvature_phase(pf.f1, x, z) + half_dtheta);
    const Complex w2 =
        state.c2 * std::polar(a2, curvature_phase(pf.f2, x, z) - half_dtheta);
    return std::norm(w1 + w2);
}

double classical_intensity(const SuperpositionState& state, double x, double z,
                           double t) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    return std::norm(state.c1) * intensity(pf.f1, x, z) +
           std::norm(state.c2) * intensity(pf.f2, x, z);
}

Vec2 reduced_current(const SuperpositionState& state,
                     const EnvironmentModel& env, double x, double z,
                     double t) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    const FieldValue f = reduced_field(pf, alpha(env, t), env.env_phase, x, z);
    return Vec2{f.jx, f.jz};
}

namespace {

/// 1-D overlap integral of two t = 0 Gaussian axis factors
/// g(u) = (2 pi s^2)^(-1/4) exp[-(u-u0)^2/(4 s^2) + i p u / hbar]:
/// integral conj(g_a) g_b du
///   = sqrt(2 sa sb / ss) exp[-(ua-ub)^2/(4 ss)]
///     exp[-(pb-pa)^2 sa^2 sb^2 / (hbar^2 ss)] e^{i phase},
/// with ss = sa^2 + sb^2 and phase = (pb-pa)(ua sb^2 + ub sa^2)/(hbar ss).
Complex axis_overlap(double sa, double sb, double ua, double ub, double pa,
                     double pb, double hbar) {
    const double ss = sa * sa + sb * sb;
    const double dp = pb - pa;
    const double mag = std::sqrt(2.0 * sa * sb / ss) *
                       std::exp(-(ua - ub) * (ua - ub) / (4.0 * ss)) *
                       std::exp(-dp * dp * sa * sa * sb * sb / (hbar * hbar * ss));
    const double phase = dp * (ua * sb * sb + ub * sa * sa) / (hbar * ss);
    return std::polar(mag, phase);
}

}  // namespace

Complex initial_overlap(const SuperpositionState& state) {
    const GaussianPacket& p1 = state.packet1;
    const GaussianPacket& p2 = state.packet2;
    const double hbar = p1.constants.hbar;
    return axis_overlap(p2.sigma_x0, p1.sigma_x0, p2.x0, p1.x0, p2.px, p1.px, hbar) *
           axis_overlap(p2.sigma_z0, p1.sigma_z0, p2.z0, p1.z0, p2.pz, p1.pz, hbar);
}

}  // namespace rqt
