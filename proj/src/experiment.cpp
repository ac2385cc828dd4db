#include "rqt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rqt/errors.hpp"
#include "rqt/sampling.hpp"

namespace rqt {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// 8-point Gauss-Legendre rule on [-1, 1] (symmetric half, 20 digits).
constexpr double kGlNode[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
constexpr double kGlWeight[4] = {
    0.36268378337836198296, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

std::vector<double> make_bin_centers(const DetectorWindow& window,
                                     double bin_width) {
    if (!(bin_width > 0.0) || !(window.x_max > window.x_min)) {
        throw DomainError("profile binning: need bin_width > 0 and an ordered window");
    }
    const auto n = static_cast<std::size_t>(
        std::llround((window.x_max - window.x_min) / bin_width));
    if (n < 1) {
        throw DomainError("profile binning: window narrower than one bin");
    }
    std::vector<double> centers(n);
    for (std::size_t i = 0; i < n; ++i) {
        centers[i] = window.x_min + (static_cast<double>(i) + 0.5) * bin_width;
    }
    return centers;
}

/// Rescales `values` (already per-meter samples or raw tallies) so the
/// profile integrates to one over its window.
void normalize_unit_area(IntensityProfile& profile) {
    double total = 0.0;
    for (double v : profile.values) total += v;
    total *= profile.bin_width;
    if (!(total > 0.0)) {
        throw ProfileError("profile normalization: zero total intensity");
    }
    for (double& v : profile.values) v /= total;
}

/// A located extremum after parabolic refinement.
struct Extremum {
    double pos = 0.0;
    double value = 0.0;
};

/// Three-point parabolic refinement around interior sample i.
Extremum refine_extremum(const IntensityProfile& p, std::size_t i) {
    const double ym = p.values[i - 1];
    const double y0 = p.values[i];
    const double yp = p.values[i + 1];
    const double d2 = ym - 2.0 * y0 + yp;
    double off = (d2 != 0.0) ? 0.5 * (ym - yp) / d2 : 0.0;
    if (!(std::abs(off) <= 1.0)) off = 0.0;  // degenerate plateau: keep the node
    Extremum e;
    e.pos = p.bin_centers[i] + off * p.bin_width;
    e.value = std::max(0.0, y0 - 0.25 * (ym - yp) * off);
    return e;
}

/// Strict interior maxima (sign = +1) or minima (sign = -1). Plateaus are
/// skipped on purpose: flat zero-count tails must not masquerade as extrema.
std::vector<Extremum> find_extrema(const IntensityProfile& p, int sign) {
    std::vector<Extremum> out;
    const std::size_t n = p.values.size();
    if (n < 3) return out;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double s = static_cast<double>(sign);
        if (s * p.values[i] > s * p.values[i - 1] &&
            s * p.values[i] > s * p.values[i + 1]) {
            out.push_back(refine_extremum(p, i));
        }
    }
    return out;
}

/// Evenly spreads up to `want` recorded trajectory ids over [0, n).
std::vector<std::int64_t> pick_record_ids(std::int64_t n, std::int64_t want) {
    std::vector<std::int64_t> ids;
    const std::int64_t k = std::min(want, n);
    ids.reserve(static_cast<std::size_t>(std::max<std::int64_t>(k, 0)));
    for (std::int64_t i = 0; i < k; ++i) {
        ids.push_back(i * n / k);
    }
    return ids;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(gap > 0.0) || !(L > 0.0) ||
        !(lambda_dB > 0.0) || !(mass > 0.0) || !(v > 0.0) ||
        !(bin_width > 0.0)) {
        throw ConfigError("experiment: all geometry/beam parameters must be > 0");
    }
    if (n_traj < 1) {
        throw ConfigError("experiment: n_traj must be >= 1");
    }
    if (!(detector_window.x_max > detector_window.x_min)) {
        throw ConfigError("experiment: detector window must have x_min < x_max");
    }
    coherence.validate();
    const PhysicalConstants constants;
    const double lambda_kinematic = 2.0 * kPi * constants.hbar / (mass * v);
    const double rel = std::abs(lambda_dB - lambda_kinematic) / lambda_kinematic;
    if (rel > 5e-3) {
        throw ConfigError(
            "experiment: lambda_dB inconsistent with 2*pi*hbar/(mass*v) "
            "beyond 0.5% (relative error " + std::to_string(rel) + ")");
    }
}

ExperimentConfig zeilinger_preset() {
    ExperimentConfig config;
    config.a1 = 21.9e-6;
    config.a2 = 22.5e-6;
    config.gap = 104.1e-6;
    config.L = 5.0;
    config.lambda_dB = 18.45e-10;
    config.mass = 1.67492749804e-27;
    config.v = 214.4;
    config.coherence = EnvironmentModel::exponential(2.26e-2);
    config.n_traj = 5420;
    config.bin_width = 20e-6;
    config.detector_window = DetectorWindow{-500e-6, 500e-6};
    return config;
}

SuperpositionState derive_state(const ExperimentConfig& config) {
    config.validate();
    PhysicalConstants constants;
    constants.mass = config.mass;
    const double hbar = constants.hbar;

    const double p_total = 2.0 * kPi * hbar / config.lambda_dB;
    const double px1 = +hbar / config.a1;  // aimed at the symmetry axis
    const double px2 = -hbar / config.a2;
    const double pz1 = std::sqrt(p_total * p_total - px1 * px1);
    const double pz2 = std::sqrt(p_total * p_total - px2 * px2);
    const double sigma_z = config.a1 + config.a2;

    SuperpositionState state;
    state.packet1 = GaussianPacket{-(config.gap + config.a1) / 2.0, 0.0,
                                   px1, pz1, config.a1 / 4.0, sigma_z,
                                   constants};
    state.packet2 = GaussianPacket{+(config.gap + config.a2) / 2.0, 0.0,
                                   px2, pz2, config.a2 / 4.0, sigma_z,
                                   constants};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    state.c1 = Complex(inv_sqrt2, 0.0);
    state.c2 = Complex(inv_sqrt2, 0.0);
    state.validate();
    return state;
}

IntensityProfile analytic_detector_profile(const SuperpositionState& state,
                                           double alpha_value, double env_phase,
                                           double t, double z,
                                           const DetectorWindow& window,
                                           double bin_width, bool classical) {
    IntensityProfile profile;
    profile.bin_centers = make_bin_centers(window, bin_width);
    profile.bin_width = bin_width;
    profile.values.resize(profile.bin_centers.size());

    const PairFrame pf = make_pair_frame(state, t);
    const auto slice = [&](double x) {
        if (classical) return classical_intensity(state, x, z, t);
        return reduced_field(pf, alpha_value, env_phase, x, z).rho;
    };

    const double half = 0.5 * bin_width;
    for (std::size_t i = 0; i < profile.bin_centers.size(); ++i) {
        const double c = profile.bin_centers[i];
        double avg = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double dx = half * kGlNode[k];
            avg += kGlWeight[k] * (slice(c + dx) + slice(c - dx));
        }
        profile.values[i] = 0.5 * avg;  // mean over the bin
    }
    normalize_unit_area(profile);
    return profile;
}

IntensityProfile fine_detector_profile(const SuperpositionState& state,
                                       double alpha_value, double env_phase,
                                       double t, double z,
                                       const DetectorWindow& window,
                                       double step, bool classical) {
    IntensityProfile profile;
    profile.bin_centers = make_bin_centers(window, step);
    profile.bin_width = step;
    profile.values.resize(profile.bin_centers.size());

    const PairFrame pf = make_pair_frame(state, t);
    for (std::size_t i = 0; i < profile.bin_centers.size(); ++i) {
        const double x = profile.bin_centers[i];
        profile.values[i] = classical
                                ? classical_intensity(state, x, z, t)
                                : reduced_field(pf, alpha_value, env_phase, x, z).rho;
    }
    normalize_unit_area(profile);
    return profile;
}

IntensityProfile histogram_profile(const std::vector<Vec2>& finals,
                                   const std::vector<TrajStatus>& status,
                                   const DetectorWindow& window,
                                   double bin_width) {
    if (finals.size() != status.size()) {
        throw DomainError("histogram: finals and status sizes differ");
    }
    IntensityProfile profile;
    profile.bin_centers = make_bin_centers(window, bin_width);
    profile.bin_width = bin_width;
    const std::size_t n_bins = profile.bin_centers.size();
    profile.counts.assign(n_bins, 0.0);

    for (std::size_t i = 0; i < finals.size(); ++i) {
        if (status[i] != TrajStatus::completed) continue;
        const double x = finals[i].x;
        if (x < window.x_min || x > window.x_max) continue;
        auto bin = static_cast<std::size_t>((x - window.x_min) / bin_width);
        if (bin >= n_bins) bin = n_bins - 1;  // x exactly at the upper edge
        profile.counts[bin] += 1.0;
    }

    double total = 0.0;
    for (double c : profile.counts) total += c;
    if (!(total > 0.0)) {
        throw ProfileError("histogram: no completed arrivals inside the window");
    }
    profile.values.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        profile.values[i] = profile.counts[i] / (total * bin_width);
    }
    return profile;
}

double fringe_spacing(const IntensityProfile& profile) {
    std::vector<Extremum> maxima = find_extrema(profile, +1);
    if (maxima.size() < 2) {
        throw ProfileError("fringe_spacing: fewer than two interior maxima");
    }
    // Keep the (up to) four maxima nearest the axis, where the envelope is
    // flattest and the peak positions cleanest.
    std::sort(maxima.begin(), maxima.end(), [](const Extremum& a, const Extremum& b) {
        return std::abs(a.pos) < std::abs(b.pos);
    });
    if (maxima.size() > 4) maxima.resize(4);
    std::sort(maxima.begin(), maxima.end(), [](const Extremum& a, const Extremum& b) {
        return a.pos < b.pos;
    });
    const double span = maxima.back().pos - maxima.front().pos;
    return span / static_cast<double>(maxima.size() - 1);
}

double visibility(const IntensityProfile& profile) {
    const std::vector<Extremum> maxima = find_extrema(profile, +1);
    const std::vector<Extremum> minima = find_extrema(profile, -1);
    if (maxima.empty()) {
        throw ProfileError("visibility: no interior maximum");
    }
    const Extremum central = *std::min_element(
        maxima.begin(), maxima.end(), [](const Extremum& a, const Extremum& b) {
            return std::abs(a.pos) < std::abs(b.pos);
        });

    const Extremum* left = nullptr;
    const Extremum* right = nullptr;
    for (const Extremum& m : minima) {
        if (m.pos < central.pos && (!left || m.pos > left->pos)) left = &m;
        if (m.pos > central.pos && (!right || m.pos < right->pos)) right = &m;
    }
    if (!left || !right) {
        throw ProfileError("visibility: central maximum lacks flanking minima");
    }
    const double i_max = central.value;
    const double i_min = 0.5 * (left->value + right->value);
    return (i_max - i_min) / (i_max + i_min);
}

ProfileMetrics compare_profiles(const IntensityProfile& a,
                                const IntensityProfile& b) {
    if (a.values.empty() || a.values.size() != b.values.size()) {
        throw ProfileError("compare_profiles: bin count mismatch");
    }
    const double w = a.bin_width;
    if (!(w > 0.0) || std::abs(a.bin_width - b.bin_width) > 1e-9 * w) {
        throw ProfileError("compare_profiles: bin width mismatch");
    }
    for (std::size_t i = 0; i < a.bin_centers.size(); ++i) {
        if (std::abs(a.bin_centers[i] - b.bin_centers[i]) > 1e-6 * w) {
            throw ProfileError("compare_profiles: bin center mismatch");
        }
    }
    ProfileMetrics m;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        const double s = a.values[i] + b.values[i];
        m.l1 += std::abs(d) * w;
        m.max_abs = std::max(m.max_abs, std::abs(d));
        if (s > 0.0) m.chi_square += d * d / s * w;
    }
    return m;
}

ScenarioResult run_scenario(const ExperimentConfig& config, Scenario scenario,
                            const RunOptions& options) {
    config.validate();
    if (options.threads < 1 || options.steps < 1 || options.record_stride < 1 ||
        options.traj_sample < 0) {
        throw DomainError("run_scenario: threads/steps/record_stride must be >= 1 "
                          "and traj_sample >= 0");
    }

    const SuperpositionState state = derive_state(config);
    const double t_f = config.flight_time();
    const double env_phase = config.coherence.env_phase;

    EnvironmentModel env_effective = config.coherence;
    switch (scenario) {
        case Scenario::coherent:
            env_effective = EnvironmentModel::coherent(env_phase);
            break;
        case Scenario::decoherent:
        case Scenario::independent:
            env_effective = EnvironmentModel::decoherent(env_phase);
            break;
        case Scenario::partial:
            break;  // as configured
    }
    const double alpha_run = alpha(env_effective, t_f);

    SamplerConfig sampler;
    sampler.n = config.n_traj;
    sampler.seed = options.seed;
    sampler.method = options.method;
    const std::vector<InitialSample> initials = sample_initials(state, sampler);

    IntegratorConfig integrator;
    integrator.dt = t_f / static_cast<double>(options.steps);
    integrator.t_end = t_f;
    integrator.max_refines = options.max_refines;
    integrator.step_tolerance = options.step_tolerance;
    integrator.node_floor = options.node_floor;

    EnsembleOptions ensemble;
    ensemble.threads = options.threads;
    ensemble.record_stride = options.record_stride;
    ensemble.record_ids = pick_record_ids(config.n_traj, options.traj_sample);

    const FieldKind kind = (scenario == Scenario::independent)
                               ? FieldKind::independent
                               : FieldKind::reduced;
    // Trajectories run at the overlap frozen to its flight-time value; see
    // the run_scenario contract for why the time-dependent field would not
    // transport the density.
    const EnvironmentModel env_run =
        EnvironmentModel::fixed(alpha_run, env_phase);

    const EnsembleResult ensemble_result =
        run_ensemble(initials, kind, state, env_run, integrator, ensemble);

    ScenarioResult out;
    out.trajectory_profile =
        histogram_profile(ensemble_result.finals, ensemble_result.status,
                          config.detector_window, config.bin_width);
    out.analytic_profile = analytic_detector_profile(
        state, alpha_run, env_phase, t_f, config.L, config.detector_window,
        config.bin_width, scenario == Scenario::independent);
    out.trajectory_subsample = ensemble_result.recorded;
    out.node_aborts = ensemble_result.node_aborts;
    out.alpha_run = alpha_run;
    out.t_f = t_f;
    return out;
}

}  // namespace rqt
