#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>

#include "rqt/density.hpp"
#include "rqt/dynamics.hpp"
#include "rqt/errors.hpp"
#include "rqt/experiment.hpp"

using namespace rqt;

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Two strongly overlapping packets (2 sigma apart) with complex weights --
/// the regime where every cross term matters.
SuperpositionState overlapping_state() {
    SuperpositionState s;
    s.packet1.x0 = -1e-6;
    s.packet1.z0 = 0.0;
    s.packet1.px = 2e-29;
    s.packet1.pz = 5e-29;
    s.packet1.sigma_x0 = 1e-6;
    s.packet1.sigma_z0 = 2e-6;
    s.packet2 = s.packet1;
    s.packet2.x0 = +1e-6;
    s.packet2.px = -2e-29;
    s.c1 = Complex(std::sqrt(0.4), 0.0);
    s.c2 = std::polar(std::sqrt(0.6), 0.3);
    return s;
}

/// Complex 2-D Simpson integral of f over [x0,x1] x [z0,z1].
template <typename F>
Complex simpson2d(F f, double x0, double x1, double z0, double z1, int n_odd) {
    const int n = n_odd | 1;
    const double hx = (x1 - x0) / (n - 1);
    const double hz = (z1 - z0) / (n - 1);
    auto w = [n](int i) {
        if (i == 0 || i == n - 1) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    Complex total(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        Complex row(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            row += w(j) * f(x0 + i * hx, z0 + j * hz);
        }
        total += w(i) * row;
    }
    return total * (hx * hz / 9.0);
}

}  // namespace

TEST_CASE("superposition state: weight normalization is enforced") {
    SuperpositionState s = overlapping_state();
    CHECK_NOTHROW(s.validate());
    s.c1 = Complex(0.9, 0.0);
    s.c2 = Complex(0.9, 0.0);
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("reduced intensity: coherent and decoherent limits are the two reference forms") {
    const SuperpositionState state = derive_state(zeilinger_preset());
    const double t_f = zeilinger_preset().flight_time();
    const EnvironmentModel coh = EnvironmentModel::coherent();
    const EnvironmentModel dec = EnvironmentModel::decoherent();

    double worst_coh = 0.0, worst_dec = 0.0;
    for (double t : {0.3 * t_f, 0.7 * t_f, t_f}) {
        for (int i = 0; i < 41; ++i) {
            const double x = -2.0e-4 + i * 1e-5;
            const double z = state.packet1.pz / state.packet1.constants.mass * t;
            const double r_coh = reduced_intensity(state, coh, x, z, t);
            const double r_dec = reduced_intensity(state, dec, x, z, t);
            // alpha = 1 doubles the coherent intensity: (1 + alpha^2) = 2.
            worst_coh = std::max(worst_coh,
                                 rel_diff(r_coh, 2.0 * coherent_intensity(state, x, z, t)));
            worst_dec = std::max(worst_dec,
                                 rel_diff(r_dec, classical_intensity(state, x, z, t)));
        }
    }
    CHECK(worst_coh <= 1e-12);
    CHECK(worst_dec <= 1e-12);
}

TEST_CASE("reduced intensity: nonnegative for intermediate coherence") {
    const SuperpositionState state = derive_state(zeilinger_preset());
    const double t_f = zeilinger_preset().flight_time();
    const EnvironmentModel env = EnvironmentModel::fixed(0.36);
    for (int i = 0; i <= 200; ++i) {
        const double x = -4e-4 + i * 4e-6;
        CHECK(reduced_intensity(state, env, x, 5.0, t_f) >= 0.0);
    }
}

TEST_CASE("fringe visibility of the reduced intensity tracks the coherence degree") {
    const ExperimentConfig config = zeilinger_preset();
    const SuperpositionState state = derive_state(config);
    const double t_f = config.flight_time();

    for (double a : {0.35632999260324227, 1.0}) {
        const IntensityProfile fine = fine_detector_profile(
            state, a, 0.0, t_f, config.L, config.detector_window, 1e-6);
        const double vis = visibility(fine);
        const double lambda = coherence_degree(a);
        CHECK(std::abs(vis - lambda) / lambda <= 0.02);
    }
}

TEST_CASE("reduced current: decoherent limit is the weighted sum of packet currents") {
    const SuperpositionState state = derive_state(zeilinger_preset());
    const EnvironmentModel dec = EnvironmentModel::decoherent();
    const double t = 1.4e-2;

    // The packets ride z = (pz/m) t and are only ~45 um wide there, so the
    // z probes must track the advected center.
    const double zc = state.packet1.pz / state.packet1.constants.mass * t;
    const double sz = spread_width(state.packet1.sigma_z0, t, state.packet1.constants);

    double worst = 0.0;
    for (double x : {-9e-5, -3e-5, 2e-5, 8e-5}) {
        for (double z : {zc - sz, zc, zc + 0.8 * sz}) {
            const Vec2 j = reduced_current(state, dec, x, z, t);
            const double q1 = std::norm(state.c1) * std::norm(evaluate(state.packet1, x, z, t));
            const double q2 = std::norm(state.c2) * std::norm(evaluate(state.packet2, x, z, t));
            const Vec2 v1 = bohmian_velocity(state.packet1, x, z, t);
            const Vec2 v2 = bohmian_velocity(state.packet2, x, z, t);
            worst = std::max(worst, rel_diff(j.x, q1 * v1.x + q2 * v2.x));
            worst = std::max(worst, rel_diff(j.z, q1 * v1.z + q2 * v2.z));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("reduced current: single occupied component reduces to the Bohmian current") {
    SuperpositionState state = derive_state(zeilinger_preset());
    state.c1 = Complex(1.0, 0.0);
    state.c2 = Complex(0.0, 0.0);
    const double alpha = 0.5;
    const EnvironmentModel env = EnvironmentModel::fixed(alpha);
    const double t = 0.8e-2;
    const double x = -5.2e-5;
    const double z = state.packet1.pz / state.packet1.constants.mass * t +
                     0.4 * spread_width(state.packet1.sigma_z0, t, state.packet1.constants);

    // The raw fields keep the global (1 + alpha^2) prefactor (the cross term
    // vanishes with c2 = 0); the guide velocity J/rho is prefactor-free and
    // must coincide with the lone packet's Bohmian velocity.
    const Vec2 j = reduced_current(state, env, x, z, t);
    const double rho1 = std::norm(evaluate(state.packet1, x, z, t));
    const Vec2 v1 = bohmian_velocity(state.packet1, x, z, t);
    const double pre = 1.0 + alpha * alpha;
    CHECK(rel_diff(j.x, pre * rho1 * v1.x) <= 1e-12);
    CHECK(rel_diff(j.z, pre * rho1 * v1.z) <= 1e-12);
    CHECK(rel_diff(reduced_intensity(state, env, x, z, t), pre * rho1) <= 1e-12);

    const Vec2 v = reduced_velocity(state, env, x, z, t);
    CHECK(rel_diff(v.x, v1.x) <= 1e-12);
    CHECK(rel_diff(v.z, v1.z) <= 1e-12);
}

TEST_CASE("pairwise phase difference: collapsed formula matches the direct route") {
    // Slow packets keep the absolute phases O(1), so the naive difference of
    // full phases is trustworthy here and can vouch for the collapsed form.
    SuperpositionState s = overlapping_state();
    s.packet1.px = 1e-30;
    s.packet2.px = -1.3e-30;
    s.packet1.pz = 2e-30;
    s.packet2.pz = 3e-30;
    const double t = 1e-3;

    const PairFrame pf = make_pair_frame(s, t);
    const PacketFrame f1 = make_frame(s.packet1, t);
    const PacketFrame f2 = make_frame(s.packet2, t);
    for (double x : {-2e-6, 0.0, 1.5e-6}) {
        for (double z : {-3e-6, 1e-6}) {
            const double direct = (full_phase(f1, x, z) - curvature_phase(f1, x, z)) -
                                  (full_phase(f2, x, z) - curvature_phase(f2, x, z));
            CHECK(std::abs(pair_phase_difference(pf, x, z) - direct) <= 1e-10);
        }
    }
}

TEST_CASE("initial overlap: closed form against quadrature and the benchmark value") {
    const SuperpositionState olap = overlapping_state();
    const Complex closed = initial_overlap(olap);
    const Complex quad = simpson2d(
        [&](double x, double z) {
            return std::conj(evaluate(olap.packet2, x, z, 0.0)) *
                   evaluate(olap.packet1, x, z, 0.0);
        },
        -9e-6, 9e-6, -16e-6, 16e-6, 1201);
    CHECK(std::abs(closed - quad) <= 1e-9 * std::abs(closed));
    CHECK(std::abs(closed) > 0.1);  // genuinely overlapping regime

    // Far-separated benchmark packets: frozen 40-digit quadrature reference.
    const SuperpositionState bench = derive_state(zeilinger_preset());
    CHECK(rel_diff(std::abs(initial_overlap(bench)), 6.874918862622411521e-29) <= 1e-9);
}

TEST_CASE("raw reduced-density integral carries the overlap cross term") {
    const SuperpositionState s = overlapping_state();
    const double a = 0.5;
    const double phase = 0.8;

    const PairFrame pf = make_pair_frame(s, 0.0);
    const Complex rho_integral = simpson2d(
        [&](double x, double z) {
            return Complex(reduced_field(pf, a, phase, x, z).rho, 0.0);
        },
        -11e-6, 11e-6, -18e-6, 18e-6, 1201);
    const Complex overlap = initial_overlap(s);
    const double expected =
        (1.0 + a * a) +
        4.0 * a * (std::polar(1.0, phase) * s.c1 * std::conj(s.c2) * overlap).real();
    CHECK(rel_diff(rho_integral.real(), expected) <= 1e-6);
}

TEST_CASE("continuity: reduced current transports the reduced density at constant alpha") {
    const ExperimentConfig config = zeilinger_preset();
    const SuperpositionState state = derive_state(config);
    const double t_f = config.flight_time();
    const double h_t = 5e-10;
    const double m = state.packet1.constants.mass;

    double worst = 0.0;
    for (double a : {0.0, 0.36, 1.0}) {
        const EnvironmentModel env = EnvironmentModel::fixed(a);
        for (double frac : {0.4, 0.8}) {
            const double t = frac * t_f;
            const PacketFrame f1 = make_frame(state.packet1, t);
            const double sx = std::sqrt(f1.var_x), sz = std::sqrt(f1.var_z);
            const double hx = 1e-3 * sx, hz = 1e-3 * sz;
            double max_dt = 0.0, max_res = 0.0;
            for (double ox : {-1.0, 0.0, 1.0, 1.8}) {
                for (double oz : {-1.0, 0.0, 1.0}) {
                    const double x = f1.center_x + ox * sx + 3.7e-8;
                    const double z = state.packet1.pz / m * t + oz * sz;
                    const double drho_dt =
                        (reduced_intensity(state, env, x, z, t + h_t) -
                         reduced_intensity(state, env, x, z, t - h_t)) / (2.0 * h_t);
                    const double div =
                        (reduced_current(state, env, x + hx, z, t).x -
                         reduced_current(state, env, x - hx, z, t).x) / (2.0 * hx) +
                        (reduced_current(state, env, x, z + hz, t).z -
                         reduced_current(state, env, x, z - hz, t).z) / (2.0 * hz);
                    max_dt = std::max(max_dt, std::abs(drho_dt));
                    max_res = std::max(max_res, std::abs(drho_dt + div));
                }
            }
            worst = std::max(worst, max_res / max_dt);
        }
    }
    CHECK(worst <= 1e-4);

    // Informational: with time-dependent alpha(t) the same stencil picks up
    // the explicit-dependence source term; report its size without asserting
    // (the transport identity holds only for constant alpha).
    const EnvironmentModel exp_env = EnvironmentModel::exponential(2.26e-2);
    const double t = 0.8 * t_f;
    const PacketFrame f1 = make_frame(state.packet1, t);
    const double x = f1.center_x + 3.7e-8;
    const double z = state.packet1.pz / m * t;
    const double hx = 1e-3 * std::sqrt(f1.var_x), hz = 1e-3 * std::sqrt(f1.var_z);
    const double drho_dt = (reduced_intensity(state, exp_env, x, z, t + h_t) -
                            reduced_intensity(state, exp_env, x, z, t - h_t)) / (2.0 * h_t);
    const double div = (reduced_current(state, exp_env, x + hx, z, t).x -
                        reduced_current(state, exp_env, x - hx, z, t).x) / (2.0 * hx) +
                       (reduced_current(state, exp_env, x, z + hz, t).z -
                        reduced_current(state, exp_env, x, z - hz, t).z) / (2.0 * hz);
    std::printf("[info] exponential-alpha continuity residual / |drho/dt| = %.3g\n",
                std::abs(drho_dt + div) / std::abs(drho_dt));
}

TEST_CASE("pair frame construction rejects negative times") {
    CHECK_THROWS_AS(make_pair_frame(overlapping_state(), -1e-9), DomainError);
}
