#pragma once

#include <cstdint>
#include <vector>

#include "rqt/density.hpp"

namespace rqt {

/// How trajectory launch points are drawn from the initial density.
enum class SampleMethod {
    random,         ///< seeded Monte Carlo draw from rho(0)
    quantile_grid,  ///< deterministic per-slit equal-probability x-quantiles
};

/// Sampler parameters.
struct SamplerConfig {
    std::int64_t n = 1;          ///< number of launch points
    std::uint64_t seed = 1;      ///< stream seed (random mode)
    SampleMethod method = SampleMethod::quantile_grid;

    /// Throws DomainError unless n > 0.
    void validate() const;
};

/// One launch point with its slit attribution (1 or 2). The attribution
/// feeds the independent-wave scenario and the mixture-weight statistics;
/// for strongly overlapping packets (rejection path) it names the proposing
/// component.
struct InitialSample {
    double x = 0.0;
    double z = 0.0;
    int slit = 1;
};

/// Packet-overlap magnitude below which the two-component mixture is an
/// exact sampler for |c1 psi1 + c2 psi2|^2.
inline constexpr double kOverlapThreshold = 1e-6;

/// Draws launch points distributed as the t = 0 probability density.
///
/// random: per-point counter-seeded stream; slit chosen with probability
/// |c_j|^2, then (x, z) from that packet's Gaussian. Exact when the packet
/// overlap is below kOverlapThreshold; otherwise falls back to rejection
/// sampling against the coherent density (envelope bound 2 x mixture).
///
/// quantile_grid: n split proportionally to |c_j|^2; x at the per-slit
/// Gaussian quantiles Phi^-1((k - 1/2)/n_j), z pinned to the packet center
/// (plot-friendly fans). Requires negligible overlap: throws
/// PreconditionError directing to the random method otherwise.
///
/// Identical inputs give identical output on any platform and thread count.
std::vector<InitialSample> sample_initials(const SuperpositionState& state,
                                           const SamplerConfig& sampler);

}  // namespace rqt
