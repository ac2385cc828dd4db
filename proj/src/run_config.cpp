#include "rqt/run_config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rqt/errors.hpp"

namespace rqt {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' for key " + key);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' for key " + key);
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' for key " + key);
    }
}

/// Sets the coherence model from a tau_c value using the CLI sentinels.
void apply_tau_c(EnvironmentModel& coherence, double tau_c) {
    if (tau_c == 0.0) {
        coherence.mode = CoherenceMode::decoherent;
        coherence.tau_c = 0.0;
    } else if (std::isinf(tau_c) && tau_c > 0.0) {
        coherence.mode = CoherenceMode::coherent;
        coherence.tau_c = tau_c;
    } else if (tau_c > 0.0) {
        coherence.mode = CoherenceMode::exponential;
        coherence.tau_c = tau_c;
    } else {
        throw ConfigError("config: tau_c_s must be >= 0 (0 = decoherent, inf = coherent)");
    }
}

}  // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

const char* scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::coherent: return "coherent";
        case Scenario::partial: return "partial";
        case Scenario::decoherent: return "decoherent";
        case Scenario::independent: return "independent";
    }
    return "partial";  // unreachable
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "coherent") return Scenario::coherent;
    if (name == "partial") return Scenario::partial;
    if (name == "decoherent") return Scenario::decoherent;
    if (name == "independent") return Scenario::independent;
    throw ConfigError("config: unknown scenario '" + name +
                      "' (coherent|partial|decoherent|independent)");
}

const char* coherence_mode_name(CoherenceMode mode) {
    switch (mode) {
        case CoherenceMode::exponential: return "exponential";
        case CoherenceMode::fixed: return "fixed";
        case CoherenceMode::coherent: return "coherent";
        case CoherenceMode::decoherent: return "decoherent";
    }
    return "coherent";  // unreachable
}

CoherenceMode coherence_mode_from_name(const std::string& name) {
    if (name == "exponential") return CoherenceMode::exponential;
    if (name == "fixed") return CoherenceMode::fixed;
    if (name == "coherent") return CoherenceMode::coherent;
    if (name == "decoherent") return CoherenceMode::decoherent;
    throw ConfigError("config: unknown coherence_mode '" + name +
                      "' (exponential|fixed|coherent|decoherent)");
}

const char* method_name(SampleMethod method) {
    return method == SampleMethod::random ? "random" : "quantile";
}

SampleMethod method_from_name(const std::string& name) {
    if (name == "random") return SampleMethod::random;
    if (name == "quantile") return SampleMethod::quantile_grid;
    throw ConfigError("config: unknown method '" + name + "' (random|quantile)");
}

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
    ExperimentConfig& ex = config.experiment;
    RunOptions& op = config.options;

    // Geometry / beam (SI spellings first, human-friendly variants after).
    if (key == "a1_m") { ex.a1 = parse_double(key, value); return; }
    if (key == "a1_um") { ex.a1 = parse_double(key, value) * 1e-6; return; }
    if (key == "a2_m") { ex.a2 = parse_double(key, value); return; }
    if (key == "a2_um") { ex.a2 = parse_double(key, value) * 1e-6; return; }
    if (key == "gap_m") { ex.gap = parse_double(key, value); return; }
    if (key == "gap_um") { ex.gap = parse_double(key, value) * 1e-6; return; }
    if (key == "distance_m") { ex.L = parse_double(key, value); return; }
    if (key == "lambda_m") { ex.lambda_dB = parse_double(key, value); return; }
    if (key == "lambda_angstrom") { ex.lambda_dB = parse_double(key, value) * 1e-10; return; }
    if (key == "velocity_mps") { ex.v = parse_double(key, value); return; }
    if (key == "mass_kg") { ex.mass = parse_double(key, value); return; }

    // Coherence model. tau_c_s and alpha_fixed switch the mode; an explicit
    // coherence_mode entry afterwards wins (manifests rely on this order).
    if (key == "env_phase_rad") { ex.coherence.env_phase = parse_double(key, value); return; }
    if (key == "tau_c_s") { apply_tau_c(ex.coherence, parse_double(key, value)); return; }
    if (key == "alpha_fixed") {
        ex.coherence.alpha_fixed = parse_double(key, value);
        ex.coherence.mode = CoherenceMode::fixed;
        return;
    }
    if (key == "coherence_mode") { ex.coherence.mode = coherence_mode_from_name(trim(value)); return; }

    if (key == "scenario") { config.scenario = scenario_from_name(trim(value)); return; }

    // Detector / ensemble.
    if (key == "n_traj") { ex.n_traj = parse_int(key, value); return; }
    if (key == "seed") { op.seed = parse_uint(key, value); return; }
    if (key == "bin_width_m") { ex.bin_width = parse_double(key, value); return; }
    if (key == "bin_width_um") { ex.bin_width = parse_double(key, value) * 1e-6; return; }
    if (key == "window_halfwidth_m") {
        const double h = parse_double(key, value);
        ex.detector_window = DetectorWindow{-h, h};
        return;
    }
    if (key == "window_halfwidth_um") {
        const double h = parse_double(key, value) * 1e-6;
        ex.detector_window = DetectorWindow{-h, h};
        return;
    }
    if (key == "window_min_m") { ex.detector_window.x_min = parse_double(key, value); return; }
    if (key == "window_max_m") { ex.detector_window.x_max = parse_double(key, value); return; }

    // Execution knobs.
    if (key == "method") { op.method = method_from_name(trim(value)); return; }
    if (key == "threads") {
        const std::int64_t v = parse_int(key, value);
        if (v < 0) throw ConfigError("config: threads must be >= 0 (0 = all cores)");
        op.threads = static_cast<int>(v);
        return;
    }
    if (key == "traj_sample") { op.traj_sample = parse_int(key, value); return; }
    if (key == "record_stride") { op.record_stride = static_cast<int>(parse_int(key, value)); return; }
    if (key == "steps") { op.steps = static_cast<int>(parse_int(key, value)); return; }
    if (key == "max_refines") { op.max_refines = static_cast<int>(parse_int(key, value)); return; }
    if (key == "step_tolerance_m") { op.step_tolerance = parse_double(key, value); return; }
    if (key == "node_floor") { op.node_floor = parse_double(key, value); return; }

    // Manifest metadata: recognized, never applied.
    if (key == "version" || key == "wall_time_s" || key == "node_aborts" ||
        key == "alpha_tf" || key == "visibility") {
        return;
    }

    throw ConfigError("config: unknown key '" + key + "'");
}

int apply_config_text(RunConfig& config, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int entries = 0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        }
        apply_config_entry(config, key, value);
        ++entries;
    }
    return entries;
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config: cannot read file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(config, buf.str());
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string manifest_text(const RunConfig& config, const ManifestInfo& info) {
    const ExperimentConfig& ex = config.experiment;
    const RunOptions& op = config.options;
    std::ostringstream out;
    out << "# rqtsim run manifest -- re-ingestable via --config\n";
    out << "version = " << kVersion << "\n";
    out << "a1_m = " << format_double(ex.a1) << "\n";
    out << "a2_m = " << format_double(ex.a2) << "\n";
    out << "gap_m = " << format_double(ex.gap) << "\n";
    out << "distance_m = " << format_double(ex.L) << "\n";
    out << "lambda_m = " << format_double(ex.lambda_dB) << "\n";
    out << "velocity_mps = " << format_double(ex.v) << "\n";
    out << "mass_kg = " << format_double(ex.mass) << "\n";
    out << "env_phase_rad = " << format_double(ex.coherence.env_phase) << "\n";
    out << "tau_c_s = " << format_double(ex.coherence.tau_c) << "\n";
    out << "alpha_fixed = " << format_double(ex.coherence.alpha_fixed) << "\n";
    out << "coherence_mode = " << coherence_mode_name(ex.coherence.mode) << "\n";
    out << "scenario = " << scenario_name(config.scenario) << "\n";
    out << "n_traj = " << ex.n_traj << "\n";
    out << "seed = " << op.seed << "\n";
    out << "bin_width_m = " << format_double(ex.bin_width) << "\n";
    out << "window_min_m = " << format_double(ex.detector_window.x_min) << "\n";
    out << "window_max_m = " << format_double(ex.detector_window.x_max) << "\n";
    out << "method = " << method_name(op.method) << "\n";
    out << "threads = " << op.threads << "\n";
    out << "traj_sample = " << op.traj_sample << "\n";
    out << "record_stride = " << op.record_stride << "\n";
    out << "steps = " << op.steps << "\n";
    out << "max_refines = " << op.max_refines << "\n";
    out << "step_tolerance_m = " << format_double(op.step_tolerance) << "\n";
    out << "node_floor = " << format_double(op.node_floor) << "\n";
    out << "wall_time_s = " << format_double(info.wall_time_s) << "\n";
    out << "node_aborts = " << info.node_aborts << "\n";
    out << "alpha_tf = " << format_double(info.alpha_tf) << "\n";
    out << "visibility = " << format_double(info.visibility_value) << "\n";
    return out.str();
}

std::string histogram_text(const IntensityProfile& trajectory_profile,
                           const IntensityProfile& analytic_profile) {
    if (trajectory_profile.bin_centers.size() != analytic_profile.values.size() ||
        trajectory_profile.counts.size() != trajectory_profile.values.size()) {
        throw ProfileError("histogram_text: profiles are not co-binned");
    }
    std::ostringstream out;
    out << "# detector histogram: positions in m, intensities in 1/m (unit area)\n";
    out << "# columns: bin_center_m\tcount\tnormalized_intensity\tanalytic_intensity\n";
    for (std::size_t i = 0; i < trajectory_profile.bin_centers.size(); ++i) {
        out << format_double(trajectory_profile.bin_centers[i]) << '\t'
            << format_double(trajectory_profile.counts[i]) << '\t'
            << format_double(trajectory_profile.values[i]) << '\t'
            << format_double(analytic_profile.values[i]) << '\n';
    }
    return out.str();
}

std::string profile_text(const IntensityProfile& analytic_profile) {
    std::ostringstream out;
    out << "# analytic detector profile: position in m, intensity in 1/m (unit area)\n";
    out << "# columns: bin_center_m\tanalytic_intensity\n";
    for (std::size_t i = 0; i < analytic_profile.bin_centers.size(); ++i) {
        out << format_double(analytic_profile.bin_centers[i]) << '\t'
            << format_double(analytic_profile.values[i]) << '\n';
    }
    return out.str();
}

std::string trajectories_text(const std::vector<Trajectory>& trajectories) {
    std::ostringstream out;
    out << "# trajectory subsample: time in s, positions in m\n";
    out << "# columns: traj_id\tt_s\tx_m\tz_m\n";
    for (const Trajectory& traj : trajectories) {
        for (const TrajectorySample& s : traj.samples) {
            out << traj.id << '\t' << format_double(s.t) << '\t'
                << format_double(s.x) << '\t' << format_double(s.z) << '\n';
        }
    }
    return out.str();
}

std::string sweep_text(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "# coherence-time sweep at flight time\n";
    out << "# columns: tau_c_s\talpha_tf\tlambda_analytic\tlambda_from_profile\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.tau_c) << '\t' << format_double(r.alpha_tf) << '\t'
            << format_double(r.lambda_analytic) << '\t'
            << format_double(r.lambda_profile) << '\n';
    }
    return out.str();
}

SweepRow evaluate_sweep_point(const ExperimentConfig& experiment, double tau_c) {
    EnvironmentModel env = experiment.coherence;
    apply_tau_c(env, tau_c);

    SweepRow row;
    row.tau_c = tau_c;
    const double t_f = experiment.flight_time();
    row.alpha_tf = alpha(env, t_f);
    row.lambda_analytic = coherence_degree(row.alpha_tf);

    const SuperpositionState state = derive_state(experiment);
    const IntensityProfile fine = fine_detector_profile(
        state, row.alpha_tf, env.env_phase, t_f, experiment.L,
        experiment.detector_window, 1e-6);
    try {
        row.lambda_profile = visibility(fine);
    } catch (const ProfileError&) {
        row.lambda_profile = 0.0;  // fringeless pattern
    }
    return row;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    out << text;
    if (!out) {
        throw ConfigError("failed writing output file '" + path + "'");
    }
}

}  // namespace rqt
