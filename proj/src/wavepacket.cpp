#include "rqt/wavepacket.hpp"

#include <cmath>

namespace rqt {

void GaussianPacket::validate() const {
    constants.validate();
    if (!(sigma_x0 > 0.0) || !(sigma_z0 > 0.0)) {
        throw DomainError("GaussianPacket: widths must be > 0");
    }
}

Complex complex_width(double sigma0, double t, const PhysicalConstants& constants) {
    if (!(sigma0 > 0.0)) {
        throw DomainError("complex_width: sigma0 must be > 0");
    }
    if (t < 0.0) {
        throw DomainError("complex_width: t must be >= 0");
    }
    const double beta = constants.hbar * t / (2.0 * constants.mass * sigma0 * sigma0);
    return Complex(sigma0, sigma0 * beta);
}

double spread_width(double sigma0, double t, const PhysicalConstants& constants) {
    const Complex s = complex_width(sigma0, t, constants);
    return std::hypot(s.real(), s.imag());
}

PacketFrame make_frame(const GaussianPacket& packet, double t) {
    packet.validate();
    if (t < 0.0) {
        throw DomainError("make_frame: t must be >= 0");
    }
    const double hbar = packet.constants.hbar;
    const double mass = packet.constants.mass;

    PacketFrame f;
    f.t = t;
    f.beta_x = hbar * t / (2.0 * mass * packet.sigma_x0 * packet.sigma_x0);
    f.beta_z = hbar * t / (2.0 * mass * packet.sigma_z0 * packet.sigma_z0);
    f.var_x = packet.sigma_x0 * packet.sigma_x0 * (1.0 + f.beta_x * f.beta_x);
    f.var_z = packet.sigma_z0 * packet.sigma_z0 * (1.0 + f.beta_z * f.beta_z);
    f.center_x = packet.x0 + packet.px * t / mass;
    f.center_z = packet.z0 + packet.pz * t / mass;
    f.norm2 = 1.0 / (2.0 * 3.14159265358979323846 * std::sqrt(f.var_x * f.var_z));
    f.spread_phase = -0.5 * (std::atan(f.beta_x) + std::atan(f.beta_z));
    f.global_phase = (packet.px * packet.x0 + packet.pz * packet.z0) / hbar +
                     (packet.px * packet.px + packet.pz * packet.pz) * t /
                         (2.0 * mass * hbar);
    f.px = packet.px;
    f.pz = packet.pz;
    f.inv_hbar = 1.0 / hbar;
    f.inv_mass = 1.0 / mass;
    return f;
}

double log_envelope(const PacketFrame& f, double x, double z) {
    const double xi = x - f.center_x;
    const double ze = z - f.center_z;
    return -0.25 * (xi * xi / f.var_x + ze * ze / f.var_z);
}

double intensity(const PacketFrame& f, double x, double z) {
    return f.norm2 * std::exp(2.0 * log_envelope(f, x, z));
}

double curvature_phase(const PacketFrame& f, double x, double z) {
    const double xi = x - f.center_x;
    const double ze = z - f.center_z;
    return 0.25 * (f.beta_x * xi * xi / f.var_x + f.beta_z * ze * ze / f.var_z) +
           f.spread_phase;
}

double full_phase(const PacketFrame& f, double x, double z) {
    const double xi = x - f.center_x;
    const double ze = z - f.center_z;
    return (f.px * xi + f.pz * ze) * f.inv_hbar + curvature_phase(f, x, z) +
           f.global_phase;
}

Complex log_gradient_x(const PacketFrame& f, double x) {
    // d/dx [-(x-xc)^2/(4 sigma0 s)] = -(x-xc) (1 - i beta)/(2 var) ; plus i p/hbar.
    const double xi = x - f.center_x;
    const double a = -0.5 * xi / f.var_x;
    return Complex(a, -a * f.beta_x + f.px * f.inv_hbar);
}

Complex log_gradient_z(const PacketFrame& f, double z) {
    const double ze = z - f.center_z;
    const double a = -0.5 * ze / f.var_z;
    return Complex(a, -a * f.beta_z + f.pz * f.inv_hbar);
}

Complex evaluate(const GaussianPacket& packet, double x, double z, double t) {
    const PacketFrame f = make_frame(packet, t);
    const double amp = std::sqrt(f.norm2) * std::exp(log_envelope(f, x, z));
    return std::polar(amp, full_phase(f, x, z));
}

std::pair<Complex, Complex> gradient(const GaussianPacket& packet, double x,
                                     double z, double t) {
    const PacketFrame f = make_frame(packet, t);
    const double amp = std::sqrt(f.norm2) * std::exp(log_envelope(f, x, z));
    const Complex psi = std::polar(amp, full_phase(f, x, z));
    return {psi * log_gradient_x(f, x), psi * log_gradient_z(f, z)};
}

PolarForm polar(const GaussianPacket& packet, double x, double z, double t) {
    const PacketFrame f = make_frame(packet, t);
    const double rho = intensity(f, x, z);
    if (rho < kNodeFloorDensity) {
        throw NodeError("polar: |psi|^2 below node floor");
    }
    PolarForm p;
    p.amplitude = std::sqrt(rho);
    p.action = full_phase(f, x, z) / f.inv_hbar;
    return p;
}

Vec2 bohmian_velocity(const PacketFrame& f, double x, double z) {
    const double scale = f.inv_mass / f.inv_hbar;  // hbar / m
    return Vec2{scale * log_gradient_x(f, x).imag(),
                scale * log_gradient_z(f, z).imag()};
}

Vec2 bohmian_velocity(const GaussianPacket& packet, double x, double z, double t) {
    const PacketFrame f = make_frame(packet, t);
    if (intensity(f, x, z) < kNodeFloorDensity) {
        throw NodeError("bohmian_velocity: |psi|^2 below node floor");
    }
    return bohmian_velocity(f, x, z);
}

}  // namespace rqt
