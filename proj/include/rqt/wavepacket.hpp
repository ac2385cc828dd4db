#pragma once

#include <complex>

#include "rqt/constants.hpp"
#include "rqt/errors.hpp"

namespace rqt {

using Complex = std::complex<double>;

/// A 2-component vector in the (x, z) plane.
struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

/// One freely propagating 2-D Gaussian partial wave. At t = 0 each axis
/// factor is (2 pi sigma^2)^(-1/4) exp[-(u-u0)^2/(4 sigma^2) + i p u/hbar];
/// free evolution is exact through the complex width
/// s_t = sigma0 (1 + i hbar t / (2 m sigma0^2)).
struct GaussianPacket {
    double x0 = 0.0;          ///< initial center, transverse [m]
    double z0 = 0.0;          ///< initial center, longitudinal [m]
    double px = 0.0;          ///< transverse momentum [kg m/s]
    double pz = 0.0;          ///< longitudinal momentum [kg m/s]
    double sigma_x0 = 1.0;    ///< initial width, transverse [m]
    double sigma_z0 = 1.0;    ///< initial width, longitudinal [m]
    PhysicalConstants constants;

    /// Throws DomainError unless both widths are strictly positive (and the
    /// constants validate).
    void validate() const;
};

/// Polar decomposition psi = R exp(i S / hbar) at one point.
struct PolarForm {
    double amplitude = 0.0;   ///< R = |psi| [m^-1]
    double action = 0.0;      ///< S = hbar * phase [J s], analytic branch
};

/// Heller complex width s_t = sigma0 (1 + i hbar t/(2 m sigma0^2)).
/// The |psi|^2 width grows as sigma_t = sigma0 sqrt(1 + (hbar t/(2 m sigma0^2))^2).
/// Throws DomainError for sigma0 <= 0 or t < 0.
Complex complex_width(double sigma0, double t, const PhysicalConstants& constants);

/// |psi|^2 width sigma_t = |s_t| (same domain restrictions as complex_width).
double spread_width(double sigma0, double t, const PhysicalConstants& constants);

/// Per-time evaluation cache for one packet. All field evaluations at a fixed
/// time share these quantities; building one costs a few flops and two atan
/// calls, evaluating with one costs ~1 exp. The members are chosen so that
/// the large optical phase p.r/hbar never has to be reconstructed from
/// differences of large numbers (see pair evaluation in the density module).
struct PacketFrame {
    double t = 0.0;           ///< evaluation time [s]
    double beta_x = 0.0;      ///< hbar t / (2 m sigma_x0^2)
    double beta_z = 0.0;      ///< hbar t / (2 m sigma_z0^2)
    double var_x = 0.0;       ///< sigma_x(t)^2 = sigma_x0^2 (1 + beta_x^2)
    double var_z = 0.0;       ///< sigma_z(t)^2
    double center_x = 0.0;    ///< x0 + px t / m
    double center_z = 0.0;    ///< z0 + pz t / m
    double norm2 = 0.0;       ///< squared normalization 1/(2 pi sigma_x(t) sigma_z(t))
    double spread_phase = 0.0;///< -(atan beta_x + atan beta_z)/2
    double global_phase = 0.0;///< (px x0 + pz z0)/hbar + (px^2+pz^2) t/(2 m hbar)
    double px = 0.0;          ///< transverse momentum [kg m/s]
    double pz = 0.0;          ///< longitudinal momentum [kg m/s]
    double inv_hbar = 0.0;    ///< 1/hbar
    double inv_mass = 0.0;    ///< 1/m
};

/// Builds the evaluation cache for `packet` at time t (>= 0, else DomainError).
PacketFrame make_frame(const GaussianPacket& packet, double t);

/// log|psi| minus log sqrt(norm2): the Gaussian envelope exponent
/// -xi_x^2/(4 var_x) - xi_z^2/(4 var_z), with xi the displacement from the
/// moving center.
double log_envelope(const PacketFrame& f, double x, double z);

/// |psi|^2 at (x, z): norm2 * exp(2 log_envelope).
double intensity(const PacketFrame& f, double x, double z);

/// Phase contributed by the envelope curvature plus the spreading phase:
/// beta_x xi_x^2/(4 var_x) + beta_z xi_z^2/(4 var_z) + spread_phase.
/// Stays O(1) at physically populated points, unlike the optical phase.
double curvature_phase(const PacketFrame& f, double x, double z);

/// Full phase arg(psi) on the analytic branch (optical + curvature + global);
/// large (~1e10 rad) for fast packets, so use only where absolute phase is
/// meant -- pairwise work must go through the density module's difference
/// formulas.
double full_phase(const PacketFrame& f, double x, double z);

/// Logarithmic gradients (d/dx log psi, d/dz log psi); these are exact
/// rational-linear expressions, finite everywhere. Each axis factor depends
/// only on its own coordinate.
Complex log_gradient_x(const PacketFrame& f, double x);
Complex log_gradient_z(const PacketFrame& f, double z);

/// psi(x, z, t). Exact free evolution; unit L2 norm at every t.
Complex evaluate(const GaussianPacket& packet, double x, double z, double t);

/// (dpsi/dx, dpsi/dz), analytic.
std::pair<Complex, Complex> gradient(const GaussianPacket& packet, double x,
                                     double z, double t);

/// Polar form R, S with S = hbar * (analytic phase); the branch is smooth in
/// (x, z, t), so S differentiates cleanly along trajectories. Throws
/// NodeError when |psi|^2 falls below kNodeFloorDensity.
PolarForm polar(const GaussianPacket& packet, double x, double z, double t);

/// Single-packet Bohmian velocity v = (hbar/m) Im[grad psi / psi]; analytic
/// and finite for a lone free Gaussian, but still guarded by the node floor.
Vec2 bohmian_velocity(const GaussianPacket& packet, double x, double z, double t);

/// Frame-cached variant of bohmian_velocity.
Vec2 bohmian_velocity(const PacketFrame& f, double x, double z);

}  // namespace rqt
