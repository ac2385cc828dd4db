#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rqt/experiment.hpp"

namespace rqt {

/// Artifact version recorded in manifests.
inline constexpr const char* kVersion = "1.0.0";

/// A fully resolved run: geometry/beam, scenario, execution knobs.
/// `options.threads == 0` means "decide at launch" (all cores); resolve it
/// with resolve_threads before calling run_scenario.
struct RunConfig {
    ExperimentConfig experiment = zeilinger_preset();
    Scenario scenario = Scenario::partial;
    RunOptions options;

    RunConfig() { options.threads = 0; }
};

/// Replaces 0 (auto) with the machine's core count (at least 1).
int resolve_threads(int requested);

// Enum <-> name helpers; *_from_name throws ConfigError on unknown names.
const char* scenario_name(Scenario scenario);
Scenario scenario_from_name(const std::string& name);
const char* coherence_mode_name(CoherenceMode mode);
CoherenceMode coherence_mode_from_name(const std::string& name);
const char* method_name(SampleMethod method);
SampleMethod method_from_name(const std::string& name);

/// Applies one configuration entry. Keys are unit-suffixed; SI and
/// human-friendly spellings are both accepted (a1_m / a1_um, lambda_m /
/// lambda_angstrom, bin_width_m / bin_width_um, ...). `tau_c_s` carries the
/// sentinels 0 -> decoherent and inf -> coherent, any other positive value
/// -> exponential; `alpha_fixed` switches to the fixed mode; an explicit
/// `coherence_mode` entry overrides either (last entry wins). Manifest
/// metadata keys (version, wall_time_s, node_aborts, alpha_tf, visibility)
/// are recognized and skipped so a manifest can be re-ingested verbatim.
/// Throws ConfigError on unknown keys or unparsable values.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

/// Parses flat `key = value` text ('#' starts a comment, blank lines are
/// ignored) and applies every entry in order. Returns the entry count.
int apply_config_text(RunConfig& config, const std::string& text);

/// Reads and applies a configuration file (ConfigError if unreadable).
void apply_config_file(RunConfig& config, const std::string& path);

/// Formats a double with 17 significant digits so that re-parsing
/// reproduces the exact bit pattern.
std::string format_double(double value);

/// Run outcome numbers recorded in the manifest as skipped metadata.
struct ManifestInfo {
    double wall_time_s = 0.0;
    std::int64_t node_aborts = 0;
    double alpha_tf = 0.0;
    double visibility_value = 0.0;  ///< 0 when the profile has no fringes
};

/// Complete re-ingestable manifest (config snapshot in SI units + metadata).
std::string manifest_text(const RunConfig& config, const ManifestInfo& info);

/// Histogram table: bin_center_m, count, normalized_intensity,
/// analytic_intensity (tab-separated; profiles must share binning).
std::string histogram_text(const IntensityProfile& trajectory_profile,
                           const IntensityProfile& analytic_profile);

/// Analytic profile table: bin_center_m, analytic_intensity.
std::string profile_text(const IntensityProfile& analytic_profile);

/// Trajectory subsample table: traj_id, t_s, x_m, z_m, grouped by id.
std::string trajectories_text(const std::vector<Trajectory>& trajectories);

/// Sweep table: tau_c_s, alpha_tf, lambda_analytic, lambda_from_profile.
/// Rows keep the caller's tau_c order.
struct SweepRow {
    double tau_c = 0.0;  ///< +inf allowed
    double alpha_tf = 0.0;
    double lambda_analytic = 0.0;
    double lambda_profile = 0.0;
};
std::string sweep_text(const std::vector<SweepRow>& rows);

/// Computes one sweep row on the given geometry: alpha at flight time, the
/// analytic coherence degree, and the visibility extracted from a fine
/// (1 um) analytic detector profile (0 when fringeless).
SweepRow evaluate_sweep_point(const ExperimentConfig& experiment, double tau_c);

/// Writes text to a file, creating parent directories; ConfigError on
/// failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rqt
