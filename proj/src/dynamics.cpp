#include "rqt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace rqt {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw DomainError("IntegratorConfig: dt and t_end must be > 0");
    }
    if (!(step_tolerance > 0.0)) {
        throw DomainError("IntegratorConfig: step_tolerance must be > 0");
    }
    if (max_refines < 0) {
        throw DomainError("IntegratorConfig: max_refines must be >= 0");
    }
}

Vec2 reduced_velocity(const PairFrame& pf, double alpha_value, double env_phase,
                      double x, double z, double node_floor) {
    const FieldValue f = reduced_field(pf, alpha_value, env_phase, x, z);
    if (f.rho <= node_floor) {
        throw NodeError("reduced_velocity: density below node floor");
    }
    return Vec2{f.jx / f.rho, f.jz / f.rho};
}

Vec2 reduced_velocity(const SuperpositionState& state,
                      const EnvironmentModel& env, double x, double z, double t,
                      double node_floor) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    return reduced_velocity(pf, alpha(env, t), env.env_phase, x, z, node_floor);
}

Vec2 independent_velocity(int which_slit, const SuperpositionState& state,
                          double x, double z, double t) {
    if (which_slit != 1 && which_slit != 2) {
        throw DomainError("independent_velocity: slit must be 1 or 2");
    }
    return bohmian_velocity(which_slit == 1 ? state.packet1 : state.packet2, x,
                            z, t);
}

Vec2 coherent_superposition_velocity(const SuperpositionState& state, double x,
                                     double z, double t, double node_floor) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    // Common phase dropped symmetrically: velocities depend only on the
    // relative phase, and the O(1) split keeps the arithmetic noise-free.
    const double half_dtheta = 0.5 * pair_phase_difference(pf, x, z);
    const double a1 = std::sqrt(pf.f1.norm2) * std::exp(log_envelope(pf.f1, x, z));
    const double a2 = std::sqrt(pf.f2.norm2) * std::exp(log_envelope(pf.f2, x, z));
    const Complex w1 =
        state.c1 * std::polar(a1, curvature_phase(pf.f1, x, z) + half_dtheta);
    const Complex w2 =
        state.c2 * std::polar(a2, curvature_phase(pf.f2, x, z) - half_dtheta);
    const Complex psi = w1 + w2;
    if (std::norm(psi) <= node_floor) {
        throw NodeError("coherent_superposition_velocity: node");
    }
    const Complex gx = w1 * log_gradient_x(pf.f1, x) + w2 * log_gradient_x(pf.f2, x);
    const Complex gz = w1 * log_gradient_z(pf.f1, z) + w2 * log_gradient_z(pf.f2, z);
    return Vec2{pf.hbar_over_m * (gx / psi).imag(),
                pf.hbar_over_m * (gz / psi).imag()};
}

Vec2 classical_mixture_velocity(const SuperpositionState& state, double x,
                                double z, double t, double node_floor) {
    state.validate();
    const PairFrame pf = make_pair_frame(state, t);
    const double q1 = std::norm(state.c1) * intensity(pf.f1, x, z);
    const double q2 = std::norm(state.c2) * intensity(pf.f2, x, z);
    if (q1 + q2 <= node_floor) {
        throw NodeError("classical_mixture_velocity: density below node floor");
    }
    const Vec2 v1 = bohmian_velocity(pf.f1, x, z);
    const Vec2 v2 = bohmian_velocity(pf.f2, x, z);
    return Vec2{(q1 * v1.x + q2 * v2.x) / (q1 + q2),
                (q1 * v1.z + q2 * v2.z) / (q1 + q2)};
}

namespace {

/// Pair frame plus the environment overlap at one instant.
struct FieldFrame {
    PairFrame pair;
    double alpha_value = 0.0;
};

/// Exception-free velocity evaluator for the integration hot loop.
class VelocityField {
  public:
    VelocityField(FieldKind kind, int slit, const SuperpositionState& state,
                  const EnvironmentModel& env, double node_floor)
        : kind_(kind), slit_(slit), state_(state), env_(env),
          node_floor_(node_floor) {}

    FieldFrame frame_at(double t) const {
        return FieldFrame{make_pair_frame(state_, t), alpha(env_, t)};
    }

    /// Returns false at a node instead of throwing.
    bool eval(const FieldFrame& ff, double x, double z, Vec2& v) const {
        if (kind_ == FieldKind::independent) {
            const PacketFrame& f = slit_ == 1 ? ff.pair.f1 : ff.pair.f2;
            if (intensity(f, x, z) <= node_floor_) {
                return false;
            }
            v = bohmian_velocity(f, x, z);
            return true;
        }
        const FieldValue fv =
            reduced_field(ff.pair, ff.alpha_value, env_.env_phase, x, z);
        if (fv.rho <= node_floor_) {
            return false;
        }
        v = Vec2{fv.jx / fv.rho, fv.jz / fv.rho};
        return true;
    }

  private:
    FieldKind kind_;
    int slit_;
    const SuperpositionState& state_;
    const EnvironmentModel& env_;
    double node_floor_;
};

double speed(const Vec2& v) { return std::hypot(v.x, v.z); }

/// One RK4 advance of y over [t0, t0 + h], splitting locally when the step
/// outruns step_tolerance or lands on a node. Frames for the three stage
/// times are either shared grid entries or freshly built (refinement path).
/// Returns false when a node persists at max refinement depth.
bool rk4_advance(const VelocityField& field, const IntegratorConfig& cfg,
                 Vec2& y, double t0, double h, int depth, const FieldFrame& fa,
                 const FieldFrame& fm, const FieldFrame& fb) {
    const auto split = [&]() -> bool {
        const FieldFrame q1 = field.frame_at(t0 + 0.25 * h);
        const FieldFrame q3 = field.frame_at(t0 + 0.75 * h);
        return rk4_advance(field, cfg, y, t0, 0.5 * h, depth + 1, fa, q1, fm) &&
               rk4_advance(field, cfg, y, t0 + 0.5 * h, 0.5 * h, depth + 1, fm,
                           q3, fb);
    };
    const bool can_split = depth < cfg.max_refines;

    Vec2 v1;
    if (!field.eval(fa, y.x, y.z, v1)) {
        return can_split ? split() : false;
    }
    if (can_split && speed(v1) * h > cfg.step_tolerance) {
        return split();
    }

    Vec2 v2, v3, v4;
    if (!field.eval(fm, y.x + 0.5 * h * v1.x, y.z + 0.5 * h * v1.z, v2) ||
        !field.eval(fm, y.x + 0.5 * h * v2.x, y.z + 0.5 * h * v2.z, v3) ||
        !field.eval(fb, y.x + h * v3.x, y.z + h * v3.z, v4)) {
        return can_split ? split() : false;
    }
    const double vmax = std::max({speed(v2), speed(v3), speed(v4)});
    if (can_split && vmax * h > cfg.step_tolerance) {
        return split();
    }
    // A speed violation surviving max depth is committed anyway: the field is
    // finite there, only the local error bound is looser than requested.
    y.x += h / 6.0 * (v1.x + 2.0 * v2.x + 2.0 * v3.x + v4.x);
    y.z += h / 6.0 * (v1.z + 2.0 * v2.z + 2.0 * v3.z + v4.z);
    return true;
}

/// Shared per-run tables: base-grid boundary times and stage frames.
struct StepGrid {
    std::vector<double> boundaries;   ///< t_0 = 0, ..., t_n = t_end
    std::vector<FieldFrame> frames;   ///< size 2n+1: boundaries + midpoints
};

StepGrid build_grid(const VelocityField& field, const IntegratorConfig& cfg) {
    const double ratio = cfg.t_end / cfg.dt;
    std::int64_t n = std::llround(ratio);
    if (n < 1 || std::abs(static_cast<double>(n) - ratio) > 1e-9 * ratio) {
        n = static_cast<std::int64_t>(std::ceil(ratio - 1e-12));
    }
    StepGrid g;
    g.boundaries.resize(static_cast<std::size_t>(n) + 1);
    for (std::int64_t k = 0; k <= n; ++k) {
        g.boundaries[static_cast<std::size_t>(k)] =
            (k == n) ? cfg.t_end : static_cast<double>(k) * cfg.dt;
    }
    g.frames.resize(2 * static_cast<std::size_t>(n) + 1);
    for (std::int64_t k = 0; k <= n; ++k) {
        g.frames[2 * static_cast<std::size_t>(k)] =
            field.frame_at(g.boundaries[static_cast<std::size_t>(k)]);
        if (k < n) {
            const double mid = 0.5 * (g.boundaries[static_cast<std::size_t>(k)] +
                                      g.boundaries[static_cast<std::size_t>(k) + 1]);
            g.frames[2 * static_cast<std::size_t>(k) + 1] = field.frame_at(mid);
        }
    }
    return g;
}

/// Full integration of one launch point. `record` != nullptr keeps every
/// record_stride-th boundary (plus endpoints) in record->samples.
TrajStatus integrate_one(const VelocityField& field, const IntegratorConfig& cfg,
                         const StepGrid& grid, Vec2 y, int record_stride,
                         Trajectory* record, Vec2& final_out) {
    const std::size_t n = grid.boundaries.size() - 1;
    if (record != nullptr) {
        record->samples.push_back({0.0, y.x, y.z});
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = grid.boundaries[k];
        const double h = grid.boundaries[k + 1] - t0;
        if (!rk4_advance(field, cfg, y, t0, h, 0, grid.frames[2 * k],
                         grid.frames[2 * k + 1], grid.frames[2 * k + 2])) {
            if (record != nullptr) {
                record->status = TrajStatus::node_abort;
            }
            final_out = y;
            return TrajStatus::node_abort;
        }
        if (record != nullptr &&
            ((k + 1) % static_cast<std::size_t>(record_stride) == 0 || k + 1 == n)) {
            record->samples.push_back({grid.boundaries[k + 1], y.x, y.z});
        }
    }
    final_out = y;
    return TrajStatus::completed;
}

}  // namespace

Trajectory integrate_trajectory(Vec2 initial, const SuperpositionState& state,
                                const EnvironmentModel& env,
                                const IntegratorConfig& config) {
    state.validate();
    config.validate();
    const VelocityField field(FieldKind::reduced, 1, state, env,
                              config.node_floor);
    const StepGrid grid = build_grid(field, config);
    Trajectory out;
    out.id = 0;
    Vec2 fin;
    out.status = integrate_one(field, config, grid, initial, 1, &out, fin);
    return out;
}

EnsembleResult run_ensemble(const std::vector<InitialSample>& initials,
                            FieldKind kind, const SuperpositionState& state,
                            const EnvironmentModel& env,
                            const IntegratorConfig& config,
                            const EnsembleOptions& options) {
    if (initials.empty()) {
        throw PreconditionError("run_ensemble: empty initials");
    }
    state.validate();
    config.validate();
    const int threads =
        std::max(1, std::min<int>(options.threads,
                                  static_cast<int>(initials.size())));
    const int stride = std::max(1, options.record_stride);

    // One shared immutable stage-frame table; per-slit oracles for the
    // independent field (the reduced one ignores the slit argument).
    const VelocityField field1(kind, 1, state, env, config.node_floor);
    const VelocityField field2(kind, 2, state, env, config.node_floor);
    const StepGrid grid = build_grid(field1, config);

    const std::size_t n = initials.size();
    EnsembleResult res;
    res.finals.resize(n);
    res.status.resize(n);
    res.recorded.resize(options.record_ids.size());
    for (std::size_t r = 0; r < options.record_ids.size(); ++r) {
        res.recorded[r].id = options.record_ids[r];
    }

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto it = std::lower_bound(options.record_ids.begin(),
                                             options.record_ids.end(),
                                             static_cast<std::int64_t>(i));
            Trajectory* rec = nullptr;
            if (it != options.record_ids.end() &&
                *it == static_cast<std::int64_t>(i)) {
                rec = &res.recorded[static_cast<std::size_t>(
                    it - options.record_ids.begin())];
            }
            const VelocityField& field =
                initials[i].slit == 2 ? field2 : field1;
            res.status[i] =
                integrate_one(field, config, grid, Vec2{initials[i].x, initials[i].z},
                              stride, rec, res.finals[i]);
        }
    };

    if (threads == 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            const std::size_t begin = n * static_cast<std::size_t>(w) /
                                      static_cast<std::size_t>(threads);
            const std::size_t end = n * (static_cast<std::size_t>(w) + 1) /
                                    static_cast<std::size_t>(threads);
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (res.status[i] == TrajStatus::node_abort) {
            ++res.node_aborts;
        }
    }
    if (static_cast<double>(res.node_aborts) >
        0.01 * static_cast<double>(n)) {
        throw EnsembleError("run_ensemble: " + std::to_string(res.node_aborts) +
                            " of " + std::to_string(n) +
                            " trajectories node-aborted (> 1%)");
    }
    return res;
}

}  // namespace rqt
