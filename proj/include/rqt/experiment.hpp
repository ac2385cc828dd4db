#pragma once

#include <cstdint>
#include <vector>

#include "rqt/dynamics.hpp"

namespace rqt {

/// Detector acceptance in the transverse coordinate.
struct DetectorWindow {
    double x_min = -500e-6;  ///< [m]
    double x_max = 500e-6;   ///< [m]
};

/// Double-slit geometry and run parameters. Defaults reproduce the cold-
/// neutron interferometry benchmark (two slits of 21.9 and 22.5 um separated
/// by a 104.1 um gap, observed 5 m downstream at 18.45 Angstrom).
struct ExperimentConfig {
    double a1 = 21.9e-6;         ///< slit-1 width [m]
    double a2 = 22.5e-6;         ///< slit-2 width [m]
    double gap = 104.1e-6;       ///< opaque gap between the slits [m]
    double L = 5.0;              ///< slit-to-detector distance [m]
    double lambda_dB = 18.45e-10;///< de Broglie wavelength [m]
    double mass = 1.67492749804e-27;  ///< particle mass [kg]
    double v = 214.4;            ///< longitudinal speed [m/s]
    EnvironmentModel coherence = EnvironmentModel::exponential(2.26e-2);
    std::int64_t n_traj = 5420;
    double bin_width = 20e-6;    ///< detector channel width [m]
    DetectorWindow detector_window;

    /// Throws ConfigError on non-positive lengths/counts or when lambda_dB
    /// disagrees with 2 pi hbar / (m v) by more than 0.5%.
    void validate() const;

    /// Flight time t_f = L / v [s].
    double flight_time() const { return L / v; }
};

/// The benchmark configuration above, spelled out.
ExperimentConfig zeilinger_preset();

/// Initial superposition state implied by the geometry: Gaussian slit
/// profiles sigma_xj = a_j/4, common longitudinal width sigma_z = a1 + a2,
/// slit centers -(gap + a1)/2 and +(gap + a2)/2, transverse momenta
/// +hbar/a1 and -hbar/a2 (each packet aimed at the symmetry axis), equal
/// weights c1 = c2 = 1/sqrt(2).
SuperpositionState derive_state(const ExperimentConfig& config);

/// A binned (or finely sampled) detector intensity. `values` integrate to
/// one over the window; `counts` holds the raw per-bin tallies for
/// trajectory histograms and stays empty for analytic profiles.
struct IntensityProfile {
    std::vector<double> bin_centers;  ///< [m]
    std::vector<double> values;       ///< [m^-1], unit area
    std::vector<double> counts;
    double bin_width = 0.0;           ///< [m]
};

/// Scenario families: the three reduced-field runs plus the independent-wave
/// control with identical statistics but different trajectory topology.
enum class Scenario { coherent, partial, decoherent, independent };

/// Ensemble execution knobs for run_scenario.
struct RunOptions {
    std::uint64_t seed = 1;
    SampleMethod method = SampleMethod::quantile_grid;
    int threads = 1;
    std::int64_t traj_sample = 50;  ///< how many trajectories to record
    int record_stride = 8;          ///< base steps between recorded samples
    int steps = 4000;               ///< base integrator steps over t_f
    int max_refines = 12;
    double step_tolerance = 2e-3;   ///< [m]
    double node_floor = kNodeFloorDensity;
};

/// Everything a scenario run produces.
struct ScenarioResult {
    IntensityProfile trajectory_profile;
    IntensityProfile analytic_profile;
    std::vector<Trajectory> trajectory_subsample;
    std::int64_t node_aborts = 0;
    double alpha_run = 0.0;  ///< constant overlap the trajectories were run at
    double t_f = 0.0;        ///< [s]
};

/// Runs one scenario end to end: derive the state, draw launch points,
/// integrate the matching field, bin the arrivals, and evaluate the analytic
/// profile at the detector (z = L, t = t_f).
///
/// The environment model stays as configured for calibration and analytics,
/// but trajectories propagate in the field with the overlap frozen at its
/// flight-time value alpha(t_f): for time-dependent alpha the reduced current
/// no longer transports the density (the continuity equation gains an
/// explicit-dependence source term), so only the frozen field reproduces the
/// detector-plane statistics.
ScenarioResult run_scenario(const ExperimentConfig& config, Scenario scenario,
                            const RunOptions& options);

/// Bin-averaged analytic detector profile (8-point Gauss-Legendre per bin,
/// normalized to unit area over the window). `classical` selects the
/// incoherent mixture instead of the reduced intensity.
IntensityProfile analytic_detector_profile(const SuperpositionState& state,
                                           double alpha_value, double env_phase,
                                           double t, double z,
                                           const DetectorWindow& window,
                                           double bin_width,
                                           bool classical = false);

/// Pointwise analytic profile on a fine uniform grid (for extrema work).
IntensityProfile fine_detector_profile(const SuperpositionState& state,
                                       double alpha_value, double env_phase,
                                       double t, double z,
                                       const DetectorWindow& window,
                                       double step, bool classical = false);

/// Histogram of completed-trajectory arrival positions, unit area over the
/// window; arrivals outside the window are dropped.
IntensityProfile histogram_profile(const std::vector<Vec2>& finals,
                                   const std::vector<TrajStatus>& status,
                                   const DetectorWindow& window,
                                   double bin_width);

/// Mean spacing of the (parabolically refined) intensity maxima nearest the
/// axis. Throws ProfileError with fewer than two interior maxima.
double fringe_spacing(const IntensityProfile& profile);

/// (I_max - I_min) / (I_max + I_min) using the central maximum and the mean
/// of its two flanking minima. Throws ProfileError when the profile has no
/// such extremum triple (e.g. a fringeless decoherent pattern).
double visibility(const IntensityProfile& profile);

/// Pointwise comparison metrics for identically binned profiles.
struct ProfileMetrics {
    double l1 = 0.0;         ///< sum |a - b| * bin_width
    double max_abs = 0.0;    ///< max |a - b|
    double chi_square = 0.0; ///< sum (a-b)^2/(a+b) * bin_width over a+b > 0
};

/// Throws ProfileError on binning mismatch; symmetric in its arguments.
ProfileMetrics compare_profiles(const IntensityProfile& a,
                                const IntensityProfile& b);

}  // namespace rqt
