#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vesicle/diagnostics.hpp"
#include "vesicle/errors.hpp"
#include "vesicle/mesh.hpp"
#include "vesicle/necklace.hpp"
#include "vesicle/projection.hpp"
#include "vesicle/stokes.hpp"

namespace vesicle {

enum class ScenarioKind { Equilibrium, TankTreading, Tumbling, VacillatingBreathing, Custom };

inline std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Equilibrium: return "equilibrium";
        case ScenarioKind::TankTreading: return "tt";
        case ScenarioKind::Tumbling: return "tb";
        case ScenarioKind::VacillatingBreathing: return "vb";
        default: return "custom";
    }
}

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Custom;

    int particles = 42;
    double bending_stiffness = 200.0;
    double stretching_stiffness = 0.25;
    double particle_radius = 1.5;
    double rest_length = 3.0;  // defaults to one disc diameter

    double domain_length = 150.0;  // x extent
    double domain_height = 150.0;  // channel height
    int nx = 100, ny = 100;

    double viscosity_in = 1.0;
    double viscosity_out = 1.0;
    double penalty = 5e-3;
    double shear_rate = 1.0;
    BoundaryProfile boundary = BoundaryProfile::Rest;

    double dt = 5e-3;
    double t_final = 25.0;
    double target_reduced_area = 0.42;

    int output_every = 10;
    bool write_fields = false;  // keep per-snapshot flow fields for VTK export
    int quadrature_points = 7;

    double contact_cutoff_factor = 4.0;
    double uzawa_tol = 1e-10;
    int uzawa_max_iter = 10000;

    bool operator==(const ScenarioConfig&) const = default;

    long steps() const { return std::lround(t_final / dt); }
    double viscosity_contrast() const { return viscosity_in / viscosity_out; }

    MembraneParams membrane() const {
        return MembraneParams{bending_stiffness, stretching_stiffness, rest_length};
    }
    FluidParams fluid() const {
        return FluidParams{viscosity_in, viscosity_out, penalty, shear_rate, boundary};
    }

    // Throws on hard errors, returns human-readable warnings for soft ones.
    std::vector<std::string> validate() const {
        if (particles < 4) throw config_error("config: need at least 4 particles");
        if (!(particle_radius > 0.0)) throw config_error("config: particle radius must be positive");
        if (!(bending_stiffness > 0.0)) throw config_error("config: k_a must be positive");
        if (stretching_stiffness < 0.0) throw config_error("config: k_rp must be nonnegative");
        if (!(rest_length > 0.0)) throw config_error("config: rest length must be positive");
        if (!(dt > 0.0)) throw config_error("config: dt must be positive");
        if (t_final < 0.0) throw config_error("config: t_final must be nonnegative");
        if (!(domain_length > 0.0) || !(domain_height > 0.0))
            throw config_error("config: domain extents must be positive");
        if (nx < 4 || ny < 4) throw config_error("config: mesh needs nx, ny >= 4");
        if (!(target_reduced_area > 0.0) || target_reduced_area > 1.0)
            throw config_error("config: alpha must lie in (0, 1]");
        if (!(viscosity_in > 0.0) || !(viscosity_out > 0.0))
            throw config_error("config: viscosities must be positive");
        if (!(penalty > 0.0)) throw config_error("config: epsilon must be positive");
        if (output_every < 1) throw config_error("config: output cadence must be >= 1");

        std::vector<std::string> warnings;
        if (std::abs(rest_length - 2.0 * particle_radius) > 1e-12 * particle_radius)
            warnings.push_back("rest length " + std::to_string(rest_length) +
                               " differs from one disc diameter " +
                               std::to_string(2.0 * particle_radius) +
                               "; the stick constraints still pin edges to the diameter");
        if (penalty > 0.1)
            warnings.push_back("penalty epsilon " + std::to_string(penalty) +
                               " is large; rigid motion will be enforced poorly");
        return warnings;
    }
};

namespace detail {

// Largest reduced area a closed equal-chord polygon can reach (the regular
// polygon value), strictly below 1 for finite N.
inline double regular_polygon_reduced_area(int n) {
    const double x = M_PI / n;
    return x * std::cos(x) / std::sin(x);
}

struct EllipseMarch {
    std::vector<Vec2> points;  // unit-scale ellipse (semi-axes 1, q)
    double parameter_end = 0.0;
};

// Walk N chords of length `chord` along the ellipse (cos t, q sin t) starting
// from t = 0 and report where the walk ends; closure means ending at 2 pi.
inline EllipseMarch march_chords(double q, double chord, int n) {
    EllipseMarch out;
    out.points.reserve(n);
    auto at = [&](double t) { return Vec2(std::cos(t), q * std::sin(t)); };
    double t = 0.0;
    out.points.push_back(at(0.0));
    for (int k = 0; k < n; ++k) {
        const Vec2 base = at(t);
        // bracket the next intersection with the circle of radius `chord`
        double step = 0.5 * chord;  // arc per step <= step, so no root is skipped
        double lo = t, hi = t;
        while ((at(hi) - base).norm() < chord) {
            lo = hi;
            hi += step;
            if (hi - t > 4.0 * M_PI)
                throw numerical_error("init_ellipse: chord march failed to advance");
        }
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((at(mid) - base).norm() < chord ? lo : hi) = mid;
        }
        t = 0.5 * (lo + hi);
        if (k + 1 < n) out.points.push_back(at(t));
    }
    out.parameter_end = t;
    return out;
}

// Reduced area of the closed equal-chord polygon inscribed in the q-ellipse.
// Solves for the chord that makes N chords close, then measures the polygon.
inline double equal_chord_alpha(double q, int n, std::vector<Vec2>* points_out = nullptr) {
    // chord = circumference / n makes the walk overshoot (arc >= chord), so it
    // brackets closure from above
    auto circumference = [&]() {
        const int m = 4096;
        double c = 0.0;
        Vec2 prev(1.0, 0.0);
        for (int k = 1; k <= m; ++k) {
            const double t = 2.0 * M_PI * k / m;
            const Vec2 p(std::cos(t), q * std::sin(t));
            c += (p - prev).norm();
            prev = p;
        }
        return c;
    };
    const double circ = circumference();
    double chord_hi = circ / n * 1.0000000001, chord_lo = 0.5 * circ / n;
    while (march_chords(q, chord_lo, n).parameter_end > 2.0 * M_PI) chord_lo *= 0.5;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (chord_lo + chord_hi);
        (march_chords(q, mid, n).parameter_end < 2.0 * M_PI ? chord_lo : chord_hi) = mid;
    }
    const double chord = 0.5 * (chord_lo + chord_hi);
    const EllipseMarch march = march_chords(q, chord, n);

    double twice_area = 0.0;
    for (int i = 0; i < n; ++i)
        twice_area += cross2(march.points[i], march.points[(i + 1) % n]);
    const double perimeter = n * chord;
    if (points_out) *points_out = march.points;
    return 4.0 * M_PI * 0.5 * std::abs(twice_area) / (perimeter * perimeter);
}

}  // namespace detail

// Initial membrane: N discs placed chord-to-chord (every ring edge exactly one
// diameter) around an ellipse whose axis ratio is solved so the center polygon
// matches the requested reduced area. Targets at or above the regular-polygon
// limit fall back to the circle.
inline NecklaceState init_ellipse(const ScenarioConfig& cfg) {
    if (!(cfg.target_reduced_area > 0.0) || cfg.target_reduced_area > 1.0)
        throw config_error("init_ellipse: alpha must lie in (0, 1]");
    const int n = cfg.particles;
    if (n < 4) throw config_error("init_ellipse: need at least 4 particles");

    const double alpha_max = detail::regular_polygon_reduced_area(n);
    std::vector<Vec2> unit_points;
    if (cfg.target_reduced_area >= alpha_max) {
        detail::equal_chord_alpha(1.0, n, &unit_points);
    } else {
        double q_lo = 0.02, q_hi = 1.0;
        if (detail::equal_chord_alpha(q_lo, n) > cfg.target_reduced_area)
            throw config_error("init_ellipse: requested alpha " +
                               std::to_string(cfg.target_reduced_area) +
                               " is below the reachable range for N = " + std::to_string(n));
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (q_lo + q_hi);
            (detail::equal_chord_alpha(mid, n) < cfg.target_reduced_area ? q_lo : q_hi) = mid;
        }
        detail::equal_chord_alpha(0.5 * (q_lo + q_hi), n, &unit_points);
    }

    // scale so chords equal one disc diameter, then center in the box
    const double unit_chord = (unit_points[1] - unit_points[0]).norm();
    const double scale = 2.0 * cfg.particle_radius / unit_chord;
    const Vec2 center(0.5 * cfg.domain_length, 0.5 * cfg.domain_height);

    NecklaceState state;
    state.radius = cfg.particle_radius;
    state.centers.reserve(n);
    for (const Vec2& p : unit_points) state.centers.push_back(center + scale * p);

    for (const Vec2& c : state.centers)
        if (c.x() <= 0.0 || c.x() >= cfg.domain_length || c.y() <= 0.0 ||
            c.y() >= cfg.domain_height)
            throw config_error("init_ellipse: initial membrane does not fit inside the domain");
    return state;
}

struct Snapshot {
    long step = 0;
    double time = 0.0;
    NecklaceState state;
    DiagnosticsRecord record;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    double reference_area = 0.0;
    std::string error;  // empty on a clean run

    bool failed() const { return !error.empty(); }
};

// Invoked at output cadence with the flow that produced the snapshot's step
// (the field solved on the pre-step geometry; one dt behind the positions).
using FieldCallback =
    std::function<void(const Snapshot&, const FlowField&, const CoefficientFields&)>;

// Owns everything that persists across time steps: the fixed mesh, the solver
// with its cached symbolic factorization, the reference area, the angle branch
// and the contact multipliers used to warm-start the next projection.
class SimulationContext {
public:
    SimulationContext(const ScenarioConfig& cfg, const FluidMesh& mesh, double reference_area)
        : cfg_(cfg),
          mesh_(mesh),
          rule_(triangle_rule(cfg.quadrature_points)),
          reference_area_(reference_area) {}

    const QuadratureRule& rule() const { return rule_; }
    double reference_area() const { return reference_area_; }

    // One explicit Euler step: solve the penalized Stokes problem with the
    // current membrane forces, average the flow over each disc, project the
    // velocities onto the contact set and then onto the area hyperplane, and
    // advance the centers. The solved field and sampled coefficients can be
    // borrowed for visualization before the next step overwrites them.
    std::pair<NecklaceState, DiagnosticsRecord> step(const NecklaceState& state,
                                                     FlowField* field_out = nullptr,
                                                     CoefficientFields* coeffs_out = nullptr) {
        const ForceSet forces = membrane_forces(state, cfg_.membrane());
        CoefficientFields coeffs = sample_coefficients(mesh_, state, cfg_.fluid(), forces, rule_);
        const FlowField field = solver_.solve(mesh_, coeffs, cfg_.fluid());

        const std::vector<Vec2> mean_velocities =
            particle_velocities(field, mesh_, state, rule_);
        Eigen::VectorXd candidate(2 * state.size());
        for (std::size_t i = 0; i < state.size(); ++i) {
            candidate[2 * i] = mean_velocities[i].x();
            candidate[2 * i + 1] = mean_velocities[i].y();
        }

        const ConstraintSystem contacts =
            build_contact_constraints(state, cfg_.dt, cfg_.contact_cutoff_factor);
        UzawaOptions opts;
        opts.tol = cfg_.uzawa_tol;
        opts.max_iter = cfg_.uzawa_max_iter;
        const Eigen::VectorXd* warm =
            warm_multipliers_.size() == static_cast<Eigen::Index>(contacts.rows.size())
                ? &warm_multipliers_
                : nullptr;
        const ProjectionResult contact_proj = project_contacts(candidate, contacts, opts, warm);
        warm_multipliers_ = contact_proj.multipliers;

        const double area_now = polygon_area(state);
        const Eigen::VectorXd velocity =
            project_area(contact_proj.velocity, state, reference_area_, area_now, cfg_.dt);

        NecklaceState next = state;
        for (std::size_t i = 0; i < state.size(); ++i) {
            next.centers[i].x() += cfg_.dt * velocity[2 * i];
            next.centers[i].y() += cfg_.dt * velocity[2 * i + 1];
            if (next.centers[i].x() <= 0.0 || next.centers[i].x() >= cfg_.domain_length ||
                next.centers[i].y() <= 0.0 || next.centers[i].y() >= cfg_.domain_height)
                throw numerical_error("particle " + std::to_string(i) +
                                      " left the domain at t = " + std::to_string(time_ + cfg_.dt));
        }

        time_ += cfg_.dt;
        DiagnosticsRecord record = observe(next);
        record.max_stick_violation = max_stick_violation(contacts, velocity);
        record.uzawa_iterations = contact_proj.iterations;
        if (field_out) *field_out = field;
        if (coeffs_out) *coeffs_out = std::move(coeffs);
        return {std::move(next), record};
    }

    // Diagnostics for a state at the current clock, continuing the angle branch.
    DiagnosticsRecord observe(const NecklaceState& state) {
        DiagnosticsRecord rec;
        rec.time = time_;
        rec.area = polygon_area(state);
        rec.perimeter = polygon_perimeter(state);
        rec.reduced_area = reduced_area_from(rec.area, rec.perimeter);
        rec.inclination = inclination_angle(state, &rec.axes_degenerate);
        rec.inclination_unwrapped =
            has_angle_branch_ ? unwrap_next(previous_unwrapped_, rec.inclination)
                              : rec.inclination;
        previous_unwrapped_ = rec.inclination_unwrapped;
        has_angle_branch_ = true;
        rec.aspect_ratio = aspect_ratio(state);
        rec.polygon_simple = polygon_is_simple(state);
        return rec;
    }

private:
    ScenarioConfig cfg_;
    const FluidMesh& mesh_;
    QuadratureRule rule_;
    double reference_area_;
    StokesSolver solver_;
    Eigen::VectorXd warm_multipliers_;
    double time_ = 0.0;
    double previous_unwrapped_ = 0.0;
    bool has_angle_branch_ = false;
};

// Single-step entry point matching the step contract; builds a throwaway
// context, so loops should use SimulationContext directly.
inline std::pair<NecklaceState, DiagnosticsRecord> step(const NecklaceState& state,
                                                        const ScenarioConfig& cfg,
                                                        const FluidMesh& mesh,
                                                        double reference_area) {
    SimulationContext ctx(cfg, mesh, reference_area);
    return ctx.step(state);
}

// Run the scenario from t = 0 to t_final. Snapshots (state + diagnostics) are
// kept at the output cadence plus the initial and final steps. On a numerical
// failure the partial trajectory is returned with the error recorded.
inline Trajectory run(const ScenarioConfig& cfg, const FieldCallback& on_field = {}) {
    cfg.validate();
    const FluidMesh mesh = build_mesh(cfg.domain_length, cfg.domain_height, cfg.nx, cfg.ny);
    NecklaceState state = init_ellipse(cfg);

    Trajectory traj;
    traj.reference_area = polygon_area(state);
    SimulationContext ctx(cfg, mesh, traj.reference_area);

    traj.snapshots.push_back({0, 0.0, state, ctx.observe(state)});

    const bool capture = cfg.write_fields && on_field;
    const long total = cfg.steps();
    FlowField field;
    CoefficientFields coeffs;
    for (long k = 1; k <= total; ++k) {
        try {
            auto [next, record] = ctx.step(state, capture ? &field : nullptr,
                                           capture ? &coeffs : nullptr);
            state = std::move(next);
            if (k % cfg.output_every == 0 || k == total) {
                traj.snapshots.push_back({k, record.time, state, record});
                if (capture) on_field(traj.snapshots.back(), field, coeffs);
            }
        } catch (const numerical_error& err) {
            traj.error = err.what();
            break;
        }
    }
    return traj;
}

}  // namespace vesicle
