#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "rqt/errors.hpp"

namespace rqt {

/// One mixing round of the splitmix64 generator (Steele, Lea & Flood 2014;
/// see https://prng.di.unimi.it). Bijective on 64-bit words.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based stream generator: the state for stream `id` under `seed` is
/// derived by mixing, not by skipping a shared sequence, so any subset of
/// streams can be generated in any order (or in parallel) with identical
/// results. Each stream then advances as an ordinary splitmix64 engine.
class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t stream_id)
        : state_(splitmix64_mix(splitmix64_mix(seed) +
                                0x9e3779b97f4a7c15ull * (stream_id + 1))) {}

    /// Next raw 64-bit word.
    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return splitmix64_mix(state_);
    }

    /// Uniform double in the open interval (0, 1): 53-bit mantissa offset by
    /// half an ulp so that logarithms of either u or 1-u are safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Pair of independent standard normal deviates (Box-Muller).
    std::pair<double, double> next_normal_pair() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        const double a  = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    std::uint64_t state_;
};

/// Inverse of the standard normal CDF. Acklam's rational approximation
/// (relative error < 1.2e-9) polished by one Newton step on the exact CDF
/// expressed through erfc, giving ~1e-15 relative accuracy across (0, 1).
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("inverse_normal_cdf: p must lie in (0, 1)");
    }

    // Work on the lower half and reflect: Phi^-1(p) = -Phi^-1(1 - p), where
    // 1 - p is exact for p >= 0.5 (Sterbenz).  Near p = 1 the direct Newton
    // residual erfc(-x/sqrt(2))/2 - p would cancel to rounding noise, while
    // the reflected residual keeps full relative resolution in the tail.
    const bool upper = p > 0.5;
    const double pl = upper ? 1.0 - p : p;

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (pl < p_low) {
        const double q = std::sqrt(-2.0 * std::log(pl));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = pl - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // Newton polish: Phi(x) - pl = erfc(-x/sqrt(2))/2 - pl, Phi'(x) = pdf(x).
    const double inv_sqrt2 = 0.70710678118654752440;
    const double pdf = std::exp(-0.5 * x * x) * 0.39894228040143267794;
    const double err = 0.5 * std::erfc(-x * inv_sqrt2) - pl;
    x -= err / pdf;
    return upper ? -x : x;
}

}  // namespace rqt
