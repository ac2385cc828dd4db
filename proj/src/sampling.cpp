#include "rqt/sampling.hpp"

#include <cmath>

#include "rqt/rng.hpp"

namespace rqt {

void SamplerConfig::validate() const {
    if (n <= 0) {
        throw DomainError("SamplerConfig: n must be > 0");
    }
}

namespace {

std::vector<InitialSample> sample_quantile_grid(const SuperpositionState& state,
                                                const SamplerConfig& sampler,
                                                double overlap_mag) {
    if (overlap_mag >= kOverlapThreshold) {
        throw PreconditionError(
            "sample_initials: packet overlap too large for quantile-grid "
            "sampling; use the random method (rejection fallback)");
    }
    const double w1 = std::norm(state.c1);
    const std::int64_t n1 = std::llround(static_cast<double>(sampler.n) * w1);
    const std::int64_t n2 = sampler.n - n1;

    std::vector<InitialSample> out;
    out.reserve(static_cast<std::size_t>(sampler.n));
    for (std::int64_t k = 0; k < n1; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(n1);
        out.push_back({state.packet1.x0 +
                           state.packet1.sigma_x0 * inverse_normal_cdf(u),
                       state.packet1.z0, 1});
    }
    for (std::int64_t k = 0; k < n2; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(n2);
        out.push_back({state.packet2.x0 +
                           state.packet2.sigma_x0 * inverse_normal_cdf(u),
                       state.packet2.z0, 2});
    }
    return out;
}

InitialSample draw_from_packet(const GaussianPacket& p, int slit, StreamRng& rng) {
    const auto [n1, n2] = rng.next_normal_pair();
    return {p.x0 + p.sigma_x0 * n1, p.z0 + p.sigma_z0 * n2, slit};
}

std::vector<InitialSample> sample_random(const SuperpositionState& state,
                                         const SamplerConfig& sampler,
                                         double overlap_mag) {
    const double w1 = std::norm(state.c1);
    const bool exact_mixture = overlap_mag < kOverlapThreshold;

    std::vector<InitialSample> out;
    out.reserve(static_cast<std::size_t>(sampler.n));
    for (std::int64_t i = 0; i < sampler.n; ++i) {
        StreamRng rng(sampler.seed, static_cast<std::uint64_t>(i));
        for (;;) {
            const int slit = rng.next_uniform() < w1 ? 1 : 2;
            const InitialSample s = draw_from_packet(
                slit == 1 ? state.packet1 : state.packet2, slit, rng);
            if (exact_mixture) {
                out.push_back(s);
                break;
            }
            // Rejection against the coherent density: rho0 <= 2 * mixture
            // pointwise, so accepting with probability rho0 / (2 * mixture)
            // turns mixture proposals into exact rho0 draws.
            const double rho0 = coherent_intensity(state, s.x, s.z, 0.0);
            const double mix = classical_intensity(state, s.x, s.z, 0.0);
            if (rng.next_uniform() * 2.0 * mix <= rho0) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<InitialSample> sample_initials(const SuperpositionState& state,
                                           const SamplerConfig& sampler) {
    state.validate();
    sampler.validate();
    const double overlap_mag = std::abs(initial_overlap(state));
    if (sampler.method == SampleMethod::quantile_grid) {
        return sample_quantile_grid(state, sampler, overlap_mag);
    }
    return sample_random(state, sampler, overlap_mag);
}

}  // namespace rqt
