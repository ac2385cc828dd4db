#pragma once

#include <cstdint>
#include <vector>

#include "rqt/density.hpp"
#include "rqt/sampling.hpp"

namespace rqt {

/// Velocity field a trajectory follows.
enum class FieldKind {
    reduced,      ///< J-tilde / rho-tilde of the full superposition
    independent,  ///< single-packet Bohmian field of the sample's own slit
};

/// Terminal state of one trajectory.
enum class TrajStatus {
    completed,
    node_abort,  ///< entered a density null the refinement could not resolve
};

/// One recorded point of a trajectory.
struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    double z = 0.0;
};

/// One reduced-quantum-trajectory time series.
struct Trajectory {
    std::int64_t id = 0;
    std::vector<TrajectorySample> samples;  ///< strictly increasing t, first at 0
    TrajStatus status = TrajStatus::completed;
};

/// Fixed-step RK4 parameters with local refinement.
struct IntegratorConfig {
    double dt = 1e-6;             ///< base step [s]
    double t_end = 1e-3;          ///< integration horizon [s]
    int max_refines = 12;         ///< local step-halving depth limit
    double step_tolerance = 2e-3; ///< max |v| dt per (sub)step [m]
    double node_floor = kNodeFloorDensity;  ///< density treated as a node [m^-2]

    /// Throws DomainError on non-positive dt, t_end or step_tolerance.
    void validate() const;
};

/// Ensemble execution controls. Results are bitwise independent of
/// `threads`; recording keeps every `record_stride`-th base step (plus the
/// endpoint) for the listed ids.
struct EnsembleOptions {
    int threads = 1;                       ///< worker count (>= 1)
    int record_stride = 8;
    std::vector<std::int64_t> record_ids;  ///< sorted, unique
};

/// Ensemble output: per-trajectory finals in input order plus the recorded
/// subsample and the abort tally.
struct EnsembleResult {
    std::vector<Vec2> finals;
    std::vector<TrajStatus> status;
    std::vector<Trajectory> recorded;
    std::int64_t node_aborts = 0;
};

/// Reduced velocity v = J-tilde / rho-tilde. Throws NodeError when
/// rho-tilde <= node_floor (interference null).
Vec2 reduced_velocity(const SuperpositionState& state,
                      const EnvironmentModel& env, double x, double z, double t,
                      double node_floor = kNodeFloorDensity);

/// Frame-cached reduced velocity (alpha and phase supplied by the caller).
Vec2 reduced_velocity(const PairFrame& pf, double alpha_value, double env_phase,
                      double x, double z, double node_floor = kNodeFloorDensity);

/// Bohmian velocity of the chosen packet alone (which_slit in {1, 2}).
Vec2 independent_velocity(int which_slit, const SuperpositionState& state,
                          double x, double z, double t);

/// Two-packet Bohmian velocity (hbar/m) Im[grad Psi / Psi] with
/// Psi = c1 psi1 + c2 psi2 -- the fully coherent limit, computed through the
/// summed amplitude rather than the reduced-field algebra (an independent
/// route, used to pin the alpha = 1 limit).
Vec2 coherent_superposition_velocity(const SuperpositionState& state, double x,
                                     double z, double t,
                                     double node_floor = kNodeFloorDensity);

/// Density-weighted mixture of the single-packet velocities
/// (|c1|^2 rho1 v1 + |c2|^2 rho2 v2) / rho_cl -- the fully decoherent limit,
/// again algebraically independent of the reduced-field route.
Vec2 classical_mixture_velocity(const SuperpositionState& state, double x,
                                double z, double t,
                                double node_floor = kNodeFloorDensity);

/// Integrates one trajectory of the reduced field from `initial` at t = 0 to
/// config.t_end, recording every base step. Deterministic for identical
/// inputs.
Trajectory integrate_trajectory(Vec2 initial, const SuperpositionState& state,
                                const EnvironmentModel& env,
                                const IntegratorConfig& config);

/// Integrates every launch point independently (any thread count gives
/// bitwise-identical results). Throws EnsembleError if more than 1% of the
/// trajectories node-abort.
EnsembleResult run_ensemble(const std::vector<InitialSample>& initials,
                            FieldKind kind, const SuperpositionState& state,
                            const EnvironmentModel& env,
                            const IntegratorConfig& config,
                            const EnsembleOptions& options);

}  // namespace rqt
