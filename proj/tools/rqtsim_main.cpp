// rqtsim -- command-line front end for the reduced-quantum-trajectory
// library: `run` executes one double-slit scenario and writes its artifacts,
// `sweep` tabulates fringe visibility against the coherence time.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "rqt/errors.hpp"
#include "rqt/run_config.hpp"

namespace {

/// Ordered (config key, raw value) pairs collected from override flags; they
/// are applied after any preset/config file so flags win.
using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_override_flag(CLI::App* cmd, const std::string& flag,
                       std::string key, Overrides& overrides,
                       const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&overrides, key](const std::string& value) {
            overrides.emplace_back(key, value);
        },
        help);
}

/// preset -> config file -> flag overrides, in that precedence order.
rqt::RunConfig assemble_config(const std::string& preset,
                               const std::string& config_path,
                               const Overrides& overrides) {
    rqt::RunConfig config;  // zeilinger preset, partial scenario
    if (!preset.empty() && preset != "zeilinger") {
        throw rqt::ConfigError("unknown preset '" + preset +
                               "' (available: zeilinger)");
    }
    if (!config_path.empty()) {
        rqt::apply_config_file(config, config_path);
    }
    for (const auto& [key, value] : overrides) {
        rqt::apply_config_entry(config, key, value);
    }
    return config;
}

std::vector<double> parse_tau_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (begin <= csv.size()) {
        std::size_t end = csv.find(',', begin);
        if (end == std::string::npos) end = csv.size();
        std::string item = csv.substr(begin, end - begin);
        // trim
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.pop_back();
        if (!item.empty()) {
            try {
                std::size_t used = 0;
                const double v = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument("junk");
                out.push_back(v);
            } catch (const std::exception&) {
                throw rqt::ConfigError("sweep: cannot parse tau_c value '" + item + "'");
            }
        }
        begin = end + 1;
    }
    if (out.empty()) {
        throw rqt::ConfigError("sweep: --tau-c needs at least one value");
    }
    return out;
}

int do_run(rqt::RunConfig config, const std::string& out_dir) {
    config.options.threads = rqt::resolve_threads(config.options.threads);
    config.experiment.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const rqt::ScenarioResult result =
        rqt::run_scenario(config.experiment, config.scenario, config.options);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - t0;

    // Visibility is read off a fine analytic profile: detector-width bins
    // flatten the extrema, the 1 um grid does not.
    double vis = 0.0;
    bool has_vis = true;
    try {
        const rqt::SuperpositionState state = rqt::derive_state(config.experiment);
        const rqt::IntensityProfile fine = rqt::fine_detector_profile(
            state, result.alpha_run, config.experiment.coherence.env_phase,
            result.t_f, config.experiment.L, config.experiment.detector_window,
            1e-6, config.scenario == rqt::Scenario::independent);
        vis = rqt::visibility(fine);
    } catch (const rqt::ProfileError&) {
        has_vis = false;  // fringeless pattern
    }

    rqt::ManifestInfo info;
    info.wall_time_s = elapsed.count();
    info.node_aborts = result.node_aborts;
    info.alpha_tf = result.alpha_run;
    info.visibility_value = has_vis ? vis : 0.0;

    const std::filesystem::path dir(out_dir);
    const std::string histogram_path = (dir / "histogram.tsv").string();
    const std::string profile_path = (dir / "profile.tsv").string();
    const std::string traj_path = (dir / "trajectories.tsv").string();
    const std::string manifest_path = (dir / "manifest.txt").string();

    rqt::write_text_file(histogram_path,
                         rqt::histogram_text(result.trajectory_profile,
                                             result.analytic_profile));
    rqt::write_text_file(profile_path, rqt::profile_text(result.analytic_profile));
    rqt::write_text_file(traj_path,
                         rqt::trajectories_text(result.trajectory_subsample));
    rqt::write_text_file(manifest_path, rqt::manifest_text(config, info));

    std::cout << "scenario = " << rqt::scenario_name(config.scenario) << "\n"
              << "n_traj = " << config.experiment.n_traj << "\n"
              << "threads = " << config.options.threads << "\n"
              << "node_aborts = " << result.node_aborts << "\n"
              << "alpha_tf = " << rqt::format_double(result.alpha_run) << "\n";
    if (has_vis) {
        std::cout << "visibility = " << rqt::format_double(vis) << "\n";
    } else {
        std::cout << "visibility = n/a (no fringes)\n";
    }
    std::cout << "wall_time_s = " << rqt::format_double(info.wall_time_s) << "\n"
              << "wrote " << histogram_path << ", " << profile_path << ", "
              << traj_path << ", " << manifest_path << "\n";
    return 0;
}

int do_sweep(const rqt::RunConfig& config, const std::vector<double>& taus,
             const std::string& out_path) {
    std::vector<rqt::SweepRow> rows;
    rows.reserve(taus.size());
    for (double tau : taus) {
        rows.push_back(rqt::evaluate_sweep_point(config.experiment, tau));
    }
    const std::string table = rqt::sweep_text(rows);
    if (out_path.empty()) {
        std::cout << table;
    } else {
        rqt::write_text_file(out_path, table);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduced-quantum-trajectory double-slit simulator"};
    app.set_version_flag("--version", std::string("rqtsim ") + rqt::kVersion);
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    CLI::App* run = app.add_subcommand(
        "run", "execute one scenario and write histogram/profile/trajectories/manifest");
    std::string run_preset;
    std::string run_config_path;
    std::string run_out = ".";
    Overrides run_overrides;
    run->add_option("--preset", run_preset, "named parameter preset (zeilinger)");
    run->add_option("--config", run_config_path, "flat key = value config file");
    run->add_option("--out", run_out, "output directory (default .)");
    add_override_flag(run, "--scenario", "scenario", run_overrides,
                      "coherent|partial|decoherent|independent");
    add_override_flag(run, "--tau-c", "tau_c_s", run_overrides,
                      "coherence time [s]; 0 = decoherent, inf = coherent");
    add_override_flag(run, "--alpha-fixed", "alpha_fixed", run_overrides,
                      "freeze the environment overlap at this value in [0, 1]");
    add_override_flag(run, "--env-phase", "env_phase_rad", run_overrides,
                      "constant environment phase [rad]");
    add_override_flag(run, "--n-traj", "n_traj", run_overrides,
                      "number of trajectories");
    add_override_flag(run, "--seed", "seed", run_overrides,
                      "random-sampling seed");
    add_override_flag(run, "--bin-width", "bin_width_um", run_overrides,
                      "detector bin width [um]");
    add_override_flag(run, "--window-halfwidth", "window_halfwidth_um",
                      run_overrides, "detector half-width around the axis [um]");
    add_override_flag(run, "--threads", "threads", run_overrides,
                      "worker threads (0 = all cores)");
    add_override_flag(run, "--traj-sample", "traj_sample", run_overrides,
                      "trajectories recorded to the subsample file");
    add_override_flag(run, "--method", "method", run_overrides,
                      "launch-point sampling: quantile|random");
    add_override_flag(run, "--steps", "steps", run_overrides,
                      "base integrator steps over the flight time");
    add_override_flag(run, "--record-stride", "record_stride", run_overrides,
                      "base steps between recorded trajectory samples");
    add_override_flag(run, "--node-floor", "node_floor", run_overrides,
                      "density treated as an interference node [1/m^2]");
    add_override_flag(run, "--step-tolerance", "step_tolerance_m", run_overrides,
                      "max displacement per integrator substep [m]");

    // --- sweep -------------------------------------------------------------
    CLI::App* sweep = app.add_subcommand(
        "sweep", "tabulate visibility vs coherence time on the analytic profile");
    std::string sweep_preset;
    std::string sweep_config_path;
    std::string sweep_out;
    std::string sweep_taus;
    sweep->add_option("--preset", sweep_preset, "named parameter preset (zeilinger)");
    sweep->add_option("--config", sweep_config_path, "flat key = value config file");
    sweep->add_option("--tau-c", sweep_taus,
                      "comma-separated coherence times [s]; 0 and inf allowed")
        ->required();
    sweep->add_option("--out", sweep_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are configuration errors
    }

    try {
        if (run->parsed()) {
            return do_run(assemble_config(run_preset, run_config_path, run_overrides),
                          run_out);
        }
        return do_sweep(assemble_config(sweep_preset, sweep_config_path, {}),
                        parse_tau_list(sweep_taus), sweep_out);
    } catch (const rqt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rqt::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rqt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
