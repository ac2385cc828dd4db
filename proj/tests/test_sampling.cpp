#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rqt/errors.hpp"
#include "rqt/experiment.hpp"
#include "rqt/rng.hpp"
#include "rqt/sampling.hpp"

using namespace rqt;

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Two-Gaussian x-marginal CDF of the benchmark initial density (negligible
/// overlap, so the mixture form is exact).
double mixture_cdf(const SuperpositionState& s, double x) {
    const double w1 = std::norm(s.c1);
    const double w2 = std::norm(s.c2);
    return w1 * normal_cdf((x - s.packet1.x0) / s.packet1.sigma_x0) +
           w2 * normal_cdf((x - s.packet2.x0) / s.packet2.sigma_x0);
}

/// Kolmogorov-Smirnov statistic of xs (unsorted) against cdf.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = cdf(xs[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

/// Overlapping-packet state with a shared longitudinal factor, so the
/// initial density's x-marginal is |c1 psi_x1 + c2 psi_x2|^2 in closed form.
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
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    s.c1 = Complex(inv_sqrt2, 0.0);
    s.c2 = Complex(inv_sqrt2, 0.0);
    return s;
}

}  // namespace

TEST_CASE("stream rng: keyed determinism and open-interval uniforms") {
    StreamRng a(123, 7), b(123, 7), c(123, 8);
    bool identical = true, differs = false;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t va = a.next_u64();
        identical = identical && (va == b.next_u64());
        differs = differs || (va != c.next_u64());
    }
    CHECK(identical);
    CHECK(differs);

    StreamRng r(99, 0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.next_uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
}

TEST_CASE("stream rng: normal pairs have standard moments") {
    StreamRng r(2024, 5);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto [g1, g2] = r.next_normal_pair();
        sum += g1 + g2;
        sum2 += g1 * g1 + g2 * g2;
    }
    const double mean = sum / (2.0 * n);
    const double var = sum2 / (2.0 * n) - mean * mean;
    CHECK(std::abs(mean) <= 0.02);
    CHECK(std::abs(var - 1.0) <= 0.03);
}

TEST_CASE("inverse normal cdf: frozen references, symmetry, domain") {
    // 40-digit references for Phi^-1, each evaluated at the exact binary64
    // value of the C++ argument expression (near p = 1 the derivative of
    // Phi^-1 is ~1e8, so the half-ulp gap between 1.0 - 1e-9 and the real
    // number it denotes already shifts the 9th decimal).
    CHECK(rel_diff(inverse_normal_cdf(1e-6), -4.75342430882289894819) <= 1e-13);
    CHECK(rel_diff(inverse_normal_cdf(0.5 / 2710.0), -3.56131384271743002414) <= 1e-13);
    CHECK(rel_diff(inverse_normal_cdf(0.3), -0.524400512708040784038) <= 1e-13);
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK(rel_diff(inverse_normal_cdf(0.975), 1.95996398454005423552) <= 1e-13);
    CHECK(rel_diff(inverse_normal_cdf(1.0 - 1e-9), 5.99780701960163742642) <= 1e-13);

    for (double p : {1e-5, 0.12, 0.37, 0.44}) {
        CHECK(std::abs(inverse_normal_cdf(p) + inverse_normal_cdf(1.0 - p)) <=
              1e-12 * std::abs(inverse_normal_cdf(p)));
    }

    CHECK_THROWS_AS(inverse_normal_cdf(0.0), DomainError);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), DomainError);
    CHECK_THROWS_AS(inverse_normal_cdf(-0.2), DomainError);
    CHECK_THROWS_AS(inverse_normal_cdf(std::nan("")), DomainError);
}

TEST_CASE("quantile grid: per-slit quantiles, pinned z, determinism") {
    const SuperpositionState state = derive_state(zeilinger_preset());
    SamplerConfig sampler;
    sampler.n = 5420;
    sampler.method = SampleMethod::quantile_grid;

    const auto samples = sample_initials(state, sampler);
    REQUIRE(samples.size() == 5420);

    std::int64_t n1 = 0;
    double prev1 = -1.0, prev2 = -1.0;
    bool sorted = true;
    for (const InitialSample& s : samples) {
        REQUIRE((s.slit == 1 || s.slit == 2));
        if (s.slit == 1) {
            n1 += 1;
            CHECK(s.z == state.packet1.z0);
            if (prev1 >= 0.0 && s.x <= prev1) sorted = false;
            prev1 = s.x;
        } else {
            CHECK(s.z == state.packet2.z0);
            if (prev2 >= 0.0 && s.x <= prev2) sorted = false;
            prev2 = s.x;
        }
    }
    CHECK(n1 == 2710);  // |c1|^2 = 1/2 of 5420
    CHECK(sorted);

    const auto again = sample_initials(state, sampler);
    bool identical = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        identical = identical && samples[i].x == again[i].x &&
                    samples[i].z == again[i].z && samples[i].slit == again[i].slit;
    }
    CHECK(identical);

    // The stratified grid reproduces the mixture CDF to ~1/(2 n_slit).
    std::vector<double> xs;
    for (const auto& s : samples) xs.push_back(s.x);
    CHECK(ks_statistic(xs, [&](double x) { return mixture_cdf(state, x); }) <= 3e-4);
}

TEST_CASE("quantile grid: single sample sits at the heavier slit center") {
    // Weights must be genuinely unequal: at exactly 1/2 the rounded slit-1
    // count for n = 1 is a coin-flip of floating-point rounding.
    SuperpositionState state = derive_state(zeilinger_preset());
    state.c1 = Complex(std::sqrt(0.7), 0.0);
    state.c2 = Complex(std::sqrt(0.3), 0.0);
    SamplerConfig sampler;
    sampler.n = 1;
    sampler.method = SampleMethod::quantile_grid;
    const auto samples = sample_initials(state, sampler);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].slit == 1);
    // The lone median quantile maps to Phi^-1(1/2) = 0: dead center.
    CHECK(samples[0].x == state.packet1.x0);
    CHECK(samples[0].z == state.packet1.z0);
}

TEST_CASE("quantile grid: refuses strongly overlapping packets") {
    SamplerConfig sampler;
    sampler.n = 100;
    sampler.method = SampleMethod::quantile_grid;
    CHECK_THROWS_AS(sample_initials(overlapping_state(), sampler), PreconditionError);
}

TEST_CASE("random sampling: seeded determinism and slit weight law") {
    SuperpositionState state = derive_state(zeilinger_preset());
    state.c1 = Complex(std::sqrt(0.3), 0.0);
    state.c2 = Complex(std::sqrt(0.7), 0.0);

    SamplerConfig sampler;
    sampler.n = 20000;
    sampler.seed = 31;
    sampler.method = SampleMethod::random;

    const auto samples = sample_initials(state, sampler);
    const auto again = sample_initials(state, sampler);
    bool identical = true;
    std::int64_t n1 = 0;
    double z_mean = 0.0, z_sq = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        identical = identical && samples[i].x == again[i].x &&
                    samples[i].z == again[i].z;
        if (samples[i].slit == 1) n1 += 1;
        z_mean += samples[i].z;
        z_sq += samples[i].z * samples[i].z;
    }
    CHECK(identical);

    SamplerConfig other = sampler;
    other.seed = 32;
    const auto reseeded = sample_initials(state, other);
    bool moved = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        moved = moved || reseeded[i].x != samples[i].x;
    }
    CHECK(moved);

    // Binomial 3-sigma band around |c1|^2 = 0.3.
    const double frac = static_cast<double>(n1) / 20000.0;
    CHECK(std::abs(frac - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / 20000.0));

    // z is genuinely sampled (variance near sigma_z^2), not pinned.
    z_mean /= 20000.0;
    const double z_var = z_sq / 20000.0 - z_mean * z_mean;
    const double sz = state.packet1.sigma_z0;
    CHECK(std::abs(z_var - sz * sz) <= 0.1 * sz * sz);
}

TEST_CASE("random sampling: degenerate weights draw from one packet only") {
    SuperpositionState state = derive_state(zeilinger_preset());
    state.c1 = Complex(1.0, 0.0);
    state.c2 = Complex(0.0, 0.0);
    SamplerConfig sampler;
    sampler.n = 500;
    sampler.seed = 4;
    sampler.method = SampleMethod::random;
    for (const auto& s : sample_initials(state, sampler)) {
        CHECK(s.slit == 1);
        CHECK(std::abs(s.x - state.packet1.x0) <= 6.0 * state.packet1.sigma_x0);
    }
}

TEST_CASE("random sampling: empirical x-CDF matches the analytic marginal") {
    const SuperpositionState state = derive_state(zeilinger_preset());
    SamplerConfig sampler;
    sampler.n = 100000;
    sampler.seed = 1;
    sampler.method = SampleMethod::random;

    std::vector<double> xs;
    xs.reserve(100000);
    for (const auto& s : sample_initials(state, sampler)) xs.push_back(s.x);

    // 5% significance Kolmogorov critical value 1.3581 / sqrt(n), frozen.
    CHECK(ks_statistic(xs, [&](double x) { return mixture_cdf(state, x); }) <=
          4.2946892902746760e-3);
}

TEST_CASE("random sampling: rejection path reproduces an interfering density") {
    const SuperpositionState state = overlapping_state();
    SamplerConfig sampler;
    sampler.n = 20000;
    sampler.seed = 6;
    sampler.method = SampleMethod::random;

    const auto samples = sample_initials(state, sampler);
    REQUIRE(samples.size() == 20000);

    // x-marginal CDF of |c1 psi_x1 + c2 psi_x2|^2 by fine trapezoid sums
    // (the shared z factor integrates out).
    const double lo = -9e-6, hi = 9e-6;
    const int n_grid = 36001;
    const double h = (hi - lo) / (n_grid - 1);
    std::vector<double> cdf(n_grid, 0.0);
    auto marginal = [&](double x) {
        const Complex a1 = evaluate(state.packet1, x, 0.0, 0.0);
        const Complex a2 = evaluate(state.packet2, x, 0.0, 0.0);
        return std::norm(state.c1 * a1 + state.c2 * a2);
    };
    double prev = marginal(lo);
    for (int i = 1; i < n_grid; ++i) {
        const double cur = marginal(lo + i * h);
        cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * h;
        prev = cur;
    }
    const double total = cdf.back();
    auto cdf_at = [&](double x) {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        const double pos = (x - lo) / h;
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return (cdf[i] * (1.0 - frac) + cdf[i + 1] * frac) / total;
    };

    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& s : samples) xs.push_back(s.x);
    // 5% significance critical value 1.3581 / sqrt(20000).
    CHECK(ks_statistic(xs, cdf_at) <= 9.6032e-3);
}

TEST_CASE("sampler config validation") {
    SamplerConfig sampler;
    sampler.n = 0;
    CHECK_THROWS_AS(sampler.validate(), DomainError);
    const SuperpositionState state = derive_state(zeilinger_preset());
    CHECK_THROWS_AS(sample_initials(state, sampler), DomainError);
}
