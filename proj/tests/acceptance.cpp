// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run `vesicle_acceptance --only 1,2,3` to select criteria; the
// long-running shape and shear studies sit at the end.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "projection_oracle.hpp"
#include "test_support.hpp"
#include "vesicle/config.hpp"
#include "vesicle/diagnostics.hpp"
#include "vesicle/output.hpp"
#include "vesicle/simulation.hpp"

using namespace vesicle;
using vesicle::testing::fd_gradient;
using vesicle::testing::random_star_state;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail << "    FAILED: " << what << "\n";
        }
    }
    void note(const std::string& line) { detail << "    " << line << "\n"; }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
bool gradient_suite(Check& c) {
    std::mt19937 rng(20260809);
    const MembraneParams params{1.3, 0.7, 1.9};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 8 + static_cast<int>(rng() % 43);
        const NecklaceState s = random_star_state(rng, n);
        const ForceSet forces = membrane_forces(s, params);
        const auto grad = fd_gradient(
            s,
            [&](const NecklaceState& q) {
                return bending_energy(q, params) + stretching_energy(q, params);
            },
            1e-6 * s.radius);
        double scale = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) scale = std::max(scale, forces.total(i).norm());
        for (std::size_t i = 0; i < s.size(); ++i)
            worst = std::max(worst, (forces.total(i) + grad[i]).norm() / scale);
    }
    c.note("max relative force error over 100 states: " + fmt(worst));
    c.require(worst < 1e-6, "relative error must stay below 1e-6");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 2
bool area_gradient_suite(Check& c) {
    std::mt19937 rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const NecklaceState s = random_star_state(rng, 6 + static_cast<int>(rng() % 30), 4.0);
        const auto normals = area_normals(s);
        const auto fd = fd_gradient(
            s, [](const NecklaceState& q) { return signed_polygon_area(q); }, 1e-4);
        for (std::size_t i = 0; i < s.size(); ++i)
            worst = std::max(worst, (normals[i] - fd[i]).norm() / std::max(1.0, normals[i].norm()));
    }
    c.note("max normal-vs-FD deviation: " + fmt(worst));
    c.require(worst < 1e-8, "area normals must match finite differences below 1e-8");

    // quadratic remainder: fit the log-log slope of |dA - sum n.dx| vs |dx|
    const NecklaceState s = random_star_state(rng, 9, 2.0);
    const auto normals = area_normals(s);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> direction(s.size());
    for (Vec2& d : direction) d = Vec2(u(rng), u(rng)).normalized();

    std::vector<double> logs_scale, logs_err;
    for (double scale : {1e-3, 1e-4, 1e-5, 1e-6}) {
        NecklaceState moved = s;
        double predicted = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            moved.centers[i] += scale * direction[i];
            predicted += normals[i].dot(scale * direction[i]);
        }
        const double err =
            std::abs(signed_polygon_area(moved) - signed_polygon_area(s) - predicted);
        logs_scale.push_back(std::log(scale));
        logs_err.push_back(std::log(std::max(err, 1e-300)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(logs_scale.size());
    for (std::size_t k = 0; k < logs_scale.size(); ++k) {
        sx += logs_scale[k];
        sy += logs_err[k];
        sxx += logs_scale[k] * logs_scale[k];
        sxy += logs_scale[k] * logs_err[k];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    c.note("linearization-error slope: " + fmt(slope));
    c.require(std::abs(slope - 2.0) <= 0.1, "log-log slope must be 2 +/- 0.1");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 3
bool projection_suite(Check& c) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    double worst_feas = 0.0, worst_comp = 0.0, worst_idem = 0.0, worst_expansion = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        const NecklaceState s = random_star_state(rng, 10, 7.0, 1.0);
        const ConstraintSystem sys = build_contact_constraints(s, 5e-3);
        Eigen::VectorXd v1(sys.dofs), v2(sys.dofs);
        for (int i = 0; i < sys.dofs; ++i) {
            v1[i] = u(rng);
            v2[i] = u(rng);
        }
        const ProjectionResult p1 = project_contacts(v1, sys);
        const ProjectionResult p2 = project_contacts(v2, sys);

        int idx = 0;
        for (const auto& row : sys.rows) {
            const double res = sys.residual(row, p1.velocity);
            if (row.is_equality())
                worst_feas = std::max(worst_feas, std::abs(res));
            else {
                worst_feas = std::max(worst_feas, std::max(0.0, -res));
                worst_comp = std::max(worst_comp, std::abs(p1.multipliers[idx] * res));
            }
            ++idx;
        }
        const ProjectionResult again = project_contacts(p1.velocity, sys);
        worst_idem =
            std::max(worst_idem, (again.velocity - p1.velocity).lpNorm<Eigen::Infinity>());
        worst_expansion =
            std::max(worst_expansion, (p1.velocity - p2.velocity).norm() - (v1 - v2).norm());
    }
    c.note("feasibility " + fmt(worst_feas) + ", complementarity " + fmt(worst_comp) +
           ", idempotence " + fmt(worst_idem) + ", expansion excess " + fmt(worst_expansion));
    c.require(worst_feas <= 1e-10, "feasibility residual <= 1e-10");
    c.require(worst_comp <= 1e-9, "complementarity <= 1e-9");
    c.require(worst_idem <= 1e-10, "idempotence <= 1e-10");
    c.require(worst_expansion <= 1e-8, "projections must be non-expansive");

    double worst_oracle = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n_rows = 1 + static_cast<int>(rng() % 5);
        const int n_eq = static_cast<int>(rng() % (n_rows + 1));
        ConstraintSystem sys = vesicle::testing::random_projection_system(rng, 6, n_rows, n_eq);
        Eigen::VectorXd target(sys.dofs);
        for (int i = 0; i < sys.dofs; ++i) target[i] = u(rng);
        const auto oracle = vesicle::testing::brute_force_projection(target, sys);
        if (!oracle.found) {
            c.require(false, "brute-force oracle found no KKT point (test harness bug)");
            break;
        }
        UzawaOptions opts;
        opts.tol = 1e-12;
        opts.max_iter = 2000000;
        const ProjectionResult res = uzawa(target, sys, opts);
        worst_oracle =
            std::max(worst_oracle, (res.velocity - oracle.velocity).lpNorm<Eigen::Infinity>());
    }
    c.note("max deviation from brute-force enumeration: " + fmt(worst_oracle));
    c.require(worst_oracle <= 1e-9, "dual ascent must match the active-set oracle to 1e-9");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 4
bool penalty_convergence(Check& c) {
    const FluidMesh mesh = build_mesh(20.0, 20.0, 64, 64);
    const QuadratureRule rule = triangle_rule(7);
    const std::vector<Vec2> centers = {Vec2(10.0, 10.0)};
    const std::vector<Vec2> zero_force = {Vec2::Zero()};

    FluidParams fluid;
    fluid.boundary = BoundaryProfile::LinearShear;

    std::vector<double> eps = {1e-1, 1e-2, 1e-3};
    std::vector<double> norms;
    for (double e : eps) {
        fluid.penalty = e;
        const CoefficientFields coeffs =
            sample_coefficients(mesh, centers, 1.5, {}, fluid, zero_force, rule);
        const FlowField field = assemble_and_solve(mesh, coeffs, fluid);
        norms.push_back(deformation_norm_in_rigid(field, mesh, centers, 1.5, rule));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const double x = std::log(eps[k]), y = std::log(norms[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(eps.size());
    const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.note("deformation norms: " + fmt(norms[0]) + ", " + fmt(norms[1]) + ", " + fmt(norms[2]));
    c.note("empirical order in eps: " + fmt(order));
    c.require(order >= 0.8, "empirical convergence order must be >= 0.8");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 5
bool exact_shear(Check& c) {
    FluidParams fluid;
    fluid.boundary = BoundaryProfile::LinearShear;
    fluid.shear_rate = 1.0;
    const FluidMesh mesh = build_mesh(30.0, 20.0, 48, 32);
    const QuadratureRule rule = triangle_rule(7);
    const CoefficientFields coeffs = sample_coefficients(mesh, {}, 1.0, {}, fluid, {}, rule);
    const FlowField field = assemble_and_solve(mesh, coeffs, fluid);

    double worst = 0.0;
    for (int node = 0; node < mesh.num_nodes(); ++node) {
        const Vec2 expected = fluid.boundary_velocity(mesh.nodes[node], mesh.height);
        worst =
            std::max(worst, (field.node_velocity(node) - expected).lpNorm<Eigen::Infinity>());
    }
    worst = std::max(worst, field.bubble.lpNorm<Eigen::Infinity>());
    c.note("max nodal deviation from the shear profile: " + fmt(worst));
    c.require(worst < 1e-9, "discrete velocity must equal the shear profile to 1e-9");
    return c.ok;
}

// ------------------------------------------------------ criteria 6, 7, 10 rig
ScenarioConfig desk_equilibrium_config(double alpha) {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::Equilibrium;
    cfg.particles = 30;
    cfg.bending_stiffness = 200.0;
    cfg.stretching_stiffness = 0.25;
    cfg.particle_radius = 1.5;
    cfg.rest_length = 3.0;
    cfg.domain_length = cfg.domain_height = 100.0;
    cfg.nx = cfg.ny = 80;
    cfg.viscosity_in = cfg.viscosity_out = 1.0;
    cfg.penalty = 5e-3;
    cfg.dt = 5e-3;
    cfg.shear_rate = 1.0;
    cfg.boundary = BoundaryProfile::Rest;
    cfg.target_reduced_area = alpha;
    cfg.t_final = 2000 * cfg.dt;
    cfg.output_every = 10;
    return cfg;
}

std::string render_diagnostics_csv(const Trajectory& traj) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "vesicle_acceptance_csv";
    fs::remove_all(dir);
    RunManifest manifest;
    write_outputs(traj, manifest, dir.string());
    std::ifstream in(dir / "diagnostics.csv", std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool conservation(Check& c, std::string* csv_out) {
    const ScenarioConfig cfg = desk_equilibrium_config(0.42);
    const Trajectory traj = run(cfg);
    if (traj.failed()) {
        c.require(false, "run failed: " + traj.error);
        return c.ok;
    }
    const double area0 = traj.snapshots.front().record.area;
    const double perim0 = traj.snapshots.front().record.perimeter;
    double area_lo = 0.0, area_hi = 0.0, perim_lo = 0.0, perim_hi = 0.0;
    for (const Snapshot& s : traj.snapshots) {
        const double da = 100.0 * (s.record.area - area0) / area0;
        const double dp = 100.0 * (s.record.perimeter - perim0) / perim0;
        area_lo = std::min(area_lo, da);
        area_hi = std::max(area_hi, da);
        perim_lo = std::min(perim_lo, dp);
        perim_hi = std::max(perim_hi, dp);
    }
    c.note("area variation [" + fmt(area_lo) + "%, " + fmt(area_hi) + "%], perimeter [" +
           fmt(perim_lo) + "%, " + fmt(perim_hi) + "%] over 2000 steps");
    c.require(std::max(std::abs(area_lo), std::abs(area_hi)) <= 0.5,
              "area drift must stay within +/-0.5%");
    c.require(std::max(std::abs(perim_lo), std::abs(perim_hi)) <= 0.1,
              "perimeter drift must stay within +/-0.1%");
    if (csv_out) *csv_out = render_diagnostics_csv(traj);
    return c.ok;
}

bool morphology(Check& c) {
    {
        ScenarioConfig round = desk_equilibrium_config(0.9);
        round.t_final = 2000 * round.dt;
        const Trajectory traj = run(round);
        if (traj.failed()) {
            c.require(false, "alpha=0.9 run failed: " + traj.error);
            return c.ok;
        }
        const NecklaceState& final_state = traj.snapshots.back().state;
        const int concave_runs = concave_arc_count(final_state);
        c.note("alpha=0.9 final shape: " + std::to_string(concave_runs) + " concave arcs");
        c.require(concave_runs == 0, "alpha=0.9 equilibrium must end convex");
    }
    {
        ScenarioConfig deflated = desk_equilibrium_config(0.45);
        deflated.t_final = 3000 * deflated.dt;
        const Trajectory traj = run(deflated);
        if (traj.failed()) {
            c.require(false, "alpha=0.45 run failed: " + traj.error);
            return c.ok;
        }
        const NecklaceState& final_state = traj.snapshots.back().state;
        const int concave_runs = concave_arc_count(final_state);
        c.note("alpha=0.45 final shape: " + std::to_string(concave_runs) + " concave arcs");
        c.require(concave_runs == 2,
                  "alpha=0.45 equilibrium must end biconcave (exactly two concave arcs)");
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 8
ScenarioConfig shear_config(double lambda, double t_final) {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::Custom;
    cfg.particles = 38;
    cfg.bending_stiffness = 600.0;
    cfg.stretching_stiffness = 0.5;
    cfg.particle_radius = 1.5;
    cfg.rest_length = 3.0;
    // tau = 2 R0 / l with R0 = N r / pi = 18.14
    cfg.domain_height = 113.4;
    cfg.domain_length = 140.0;
    cfg.nx = 96;
    cfg.ny = 80;
    cfg.viscosity_out = 1.0;
    cfg.viscosity_in = lambda;
    cfg.penalty = 5e-3;
    cfg.dt = 5e-3;
    cfg.shear_rate = 1.0;
    cfg.boundary = BoundaryProfile::LinearShear;
    cfg.target_reduced_area = 0.85;
    cfg.t_final = t_final;
    cfg.output_every = 10;
    return cfg;
}

struct ShearSummary {
    RegimeClassification classification;
    double final_angle_deg = 0.0;
    double rotation_rate = 0.0;  // radians per time unit
    bool failed = false;
    std::string error;
};

ShearSummary run_shear(double lambda, double t_final) {
    ShearSummary out;
    const ScenarioConfig cfg = shear_config(lambda, t_final);
    const Trajectory traj = run(cfg);
    if (traj.failed()) {
        out.failed = true;
        out.error = traj.error;
        return out;
    }
    std::vector<double> unwrapped;
    for (const Snapshot& s : traj.snapshots) unwrapped.push_back(s.record.inclination_unwrapped);
    out.classification = classify_regime(unwrapped);
    const std::size_t window = std::max<std::size_t>(4, unwrapped.size() / 5);
    double mean = 0.0;
    for (std::size_t k = unwrapped.size() - window; k < unwrapped.size(); ++k)
        mean += unwrapped[k];
    out.final_angle_deg = (mean / window) * 180.0 / M_PI;
    out.rotation_rate = std::abs(unwrapped.back() - unwrapped.front()) /
                        (traj.snapshots.back().time - traj.snapshots.front().time);
    return out;
}

bool regimes(Check& c) {
    const ShearSummary tt = run_shear(1.0, 16.0);
    if (tt.failed) {
        c.require(false, "lambda=1 run failed: " + tt.error);
        return c.ok;
    }
    c.note("lambda=1: " + to_string(tt.classification.regime) + ", steady angle " +
           fmt(tt.final_angle_deg) + " deg, stddev " +
           fmt(tt.classification.final_window_stddev * 180.0 / M_PI) + " deg");
    c.require(tt.classification.regime == Regime::TankTreading,
              "lambda=1 must classify as tank-treading");
    c.require(tt.final_angle_deg > 0.0 && tt.final_angle_deg < 45.0,
              "lambda=1 steady angle must lie in (0, 45) degrees");

    const ShearSummary tb20 = run_shear(20.0, 12.0);
    if (tb20.failed) {
        c.require(false, "lambda=20 run failed: " + tb20.error);
        return c.ok;
    }
    c.note("lambda=20: " + to_string(tb20.classification.regime) + ", total change " +
           fmt(tb20.classification.total_change) + " rad, rate " + fmt(tb20.rotation_rate));
    c.require(tb20.classification.regime == Regime::Tumbling,
              "lambda=20 must classify as tumbling");
    c.require(std::abs(tb20.classification.total_change) >= M_PI,
              "lambda=20 must complete at least one half turn");

    const ShearSummary vb = run_shear(7.5, 40.0);
    if (vb.failed) {
        c.require(false, "lambda=7.5 run failed: " + vb.error);
        return c.ok;
    }
    c.note("lambda=7.5: " + to_string(vb.classification.regime) + ", oscillations " +
           fmt(vb.classification.oscillations) + ", peak-to-peak " +
           fmt(vb.classification.peak_to_peak * 180.0 / M_PI) + " deg");
    c.require(vb.classification.regime == Regime::VacillatingBreathing,
              "lambda=7.5 must classify as vacillating-breathing");

    const ShearSummary tb12 = run_shear(12.0, 16.0);
    if (tb12.failed) {
        c.require(false, "lambda=12 run failed: " + tb12.error);
        return c.ok;
    }
    c.note("lambda=12: " + to_string(tb12.classification.regime) + ", rate " +
           fmt(tb12.rotation_rate) + " vs lambda=20 rate " + fmt(tb20.rotation_rate));
    c.require(tb12.classification.regime == Regime::Tumbling,
              "lambda=12 must classify as tumbling");
    c.require(tb20.rotation_rate > tb12.rotation_rate,
              "raising the contrast from 12 to 20 must raise the rotation rate");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 9
bool capillary_identity(Check& c) {
    const ScenarioConfig cfg = preset_config("vb");
    const NecklaceState state = init_ellipse(cfg);
    const auto numbers = capillary_number(cfg.viscosity_out, cfg.shear_rate,
                                          cfg.bending_stiffness, cfg.particle_radius, state);
    const double r0 = polygon_perimeter(state) / (2.0 * M_PI);
    c.note("measured R0 " + fmt(r0) + ", capillary " + fmt(numbers.capillary) +
           ", chain modulus " + fmt(numbers.bending_modulus));
    c.require(std::abs(numbers.capillary - 7.68) / 7.68 <= 0.03,
              "capillary number must reproduce 7.68 within 3%");
    const double product = numbers.capillary * numbers.bending_modulus;
    const double direct = cfg.viscosity_out * r0 * r0 * r0 * cfg.shear_rate;
    c.require(std::abs(product - direct) <= 1e-12 * std::abs(direct),
              "capillary x modulus identity must hold to machine precision");
    return c.ok;
}

// --------------------------------------------------------------- criterion 10
bool determinism(Check& c, const std::string& first_csv) {
    std::string reference = first_csv;
    if (reference.empty()) {
        Check scratch;
        conservation(scratch, &reference);
        if (!scratch.ok) {
            c.require(false, "conservation rerun failed while preparing the baseline");
            return c.ok;
        }
    }
    const ScenarioConfig cfg = desk_equilibrium_config(0.42);
    const Trajectory traj = run(cfg);
    if (traj.failed()) {
        c.require(false, "rerun failed: " + traj.error);
        return c.ok;
    }
    const std::string second = render_diagnostics_csv(traj);
    c.note("diagnostics.csv bytes: " + std::to_string(reference.size()) + " vs " +
           std::to_string(second.size()));
    c.require(reference == second, "two identical runs must produce identical diagnostics.csv");
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int a = 1; a < argc; ++a) {
        if (std::string(argv[a]) == "--only" && a + 1 < argc) {
            std::istringstream list(argv[++a]);
            for (std::string tok; std::getline(list, tok, ',');) only.push_back(std::stoi(tok));
        }
    }
    auto selected = [&](int id) {
        return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
    };

    std::string conservation_csv;
    using Runner = std::function<bool(Check&)>;
    const std::vector<std::pair<std::string, Runner>> criteria = {
        {"membrane forces match finite differences (100 random states)", gradient_suite},
        {"area normals are the exact gradient; quadratic linearization error",
         area_gradient_suite},
        {"projection feasibility/complementarity/idempotence/non-expansiveness + oracle",
         projection_suite},
        {"penalty convergence order >= 0.8 on a 64x64 shear scene", penalty_convergence},
        {"pure shear reproduced to 1e-9 without discs", exact_shear},
        {"area within 0.5% and perimeter within 0.1% over 2000 equilibrium steps",
         [&](Check& c) { return conservation(c, &conservation_csv); }},
        {"equilibrium morphology: alpha 0.9 convex, alpha 0.45 biconcave", morphology},
        {"shear regimes at tau 0.32: TT (lambda 1), VB (7.5), TB (12, 20)", regimes},
        {"capillary number 7.68 within 3% and product identity", capillary_identity},
        {"bitwise-identical diagnostics for identical configs",
         [&](Check& c) { return determinism(c, conservation_csv); }},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!selected(id)) continue;
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criteria[k].second(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("unhandled exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  [%2d] %s  (%.1f s)\n", check.ok && ok ? "PASS" : "FAIL", id,
                    criteria[k].first.c_str(), seconds);
        std::fputs(check.detail.str().c_str(), stdout);
        std::fflush(stdout);
        if (!(check.ok && ok)) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
