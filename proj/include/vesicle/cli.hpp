#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vesicle/config.hpp"
#include "vesicle/output.hpp"
#include "vesicle/simulation.hpp"
#include "vesicle/vtk.hpp"

namespace vesicle::cli {

// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
inline int run_main(int argc, const char* const* argv) {
    CLI::App app{"necklace-membrane vesicle simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run a scenario and write CSV/VTK outputs");
    std::string config_path, out_dir = "out", preset;
    long steps = -1;
    std::vector<int> mesh_size;
    double epsilon = -1.0, dt = -1.0, lambda = -1.0;
    bool vtk = false, force = false;
    run_cmd->add_option("--config", config_path, "key=value config file");
    run_cmd->add_option("--out", out_dir, "output directory (default: out)");
    run_cmd->add_option("--preset", preset, "parameter preset: equilibrium, tt, tb, vb");
    run_cmd->add_option("--steps", steps, "number of time steps (overrides t_final)");
    run_cmd->add_option("--mesh", mesh_size, "mesh resolution NX NY")->expected(2);
    run_cmd->add_option("--epsilon", epsilon, "rigid-motion penalty");
    run_cmd->add_option("--dt", dt, "time step");
    run_cmd->add_option("--lambda", lambda, "viscosity contrast (sets mu_in = lambda * mu_out)");
    run_cmd->add_flag("--vtk", vtk, "write field_XXXXX.vtk per snapshot");
    run_cmd->add_flag("--force", force, "allow config-file overrides of preset keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ScenarioConfig cfg;
    try {
        if (!config_path.empty()) {
            std::string text;
            if (!preset.empty()) text = "preset = " + preset + "\n";
            std::ifstream in(config_path);
            if (!in) throw config_error("cannot open config file '" + config_path + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            text += buf.str();
            cfg = parse_config_text(text, force);
        } else if (!preset.empty()) {
            cfg = preset_config(preset);
        } else {
            throw config_error("either --config or --preset is required");
        }

        // command-line flags are explicit overrides and always win
        if (dt > 0.0) cfg.dt = dt;
        if (steps >= 0) cfg.t_final = static_cast<double>(steps) * cfg.dt;
        if (!mesh_size.empty()) {
            cfg.nx = mesh_size[0];
            cfg.ny = mesh_size[1];
        }
        if (epsilon > 0.0) cfg.penalty = epsilon;
        if (lambda > 0.0) cfg.viscosity_in = lambda * cfg.viscosity_out;
        if (vtk) cfg.write_fields = true;

        for (const std::string& warning : cfg.validate())
            std::cerr << "warning: " << warning << "\n";
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    namespace fs = std::filesystem;
    RunManifest manifest;
    manifest.config = cfg;

    try {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw numerical_error("cannot create output directory '" + out_dir + "'");
        write_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    FieldCallback field_writer;
    FluidMesh vis_mesh;
    if (cfg.write_fields) {
        vis_mesh = build_mesh(cfg.domain_length, cfg.domain_height, cfg.nx, cfg.ny);
        field_writer = [&](const Snapshot& snap, const FlowField& field,
                           const CoefficientFields& coeffs) {
            const std::string name = "field_" + detail::step_tag(snap.step) + ".vtk";
            write_vtk((fs::path(out_dir) / name).string(), vis_mesh, field, coeffs);
            manifest.files.push_back(name);
        };
    }

    Trajectory traj;
    try {
        traj = run(cfg, field_writer);
    } catch (const std::exception& e) {
        manifest.status = std::string("failed: simulate: ") + e.what();
        write_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    manifest.stage_seconds.emplace_back("simulate", seconds_since(t_start));

    const auto t_write = clock::now();
    try {
        manifest.status = traj.failed() ? "failed: simulate: " + traj.error : "completed";
        manifest.stage_seconds.emplace_back("write", 0.0);
        write_outputs(traj, manifest, out_dir);
        manifest.stage_seconds.back().second = seconds_since(t_write);
        write_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);
    } catch (const std::exception& e) {
        std::cerr << "output failure: " << e.what() << "\n";
        return 3;
    }

    if (traj.failed()) {
        std::cerr << "numerical failure: " << traj.error << "\n";
        std::cerr << "partial trajectory written to " << out_dir << " ("
                  << traj.snapshots.size() << " snapshots)\n";
        return 3;
    }

    const Snapshot& last = traj.snapshots.back();
    std::cout << "completed " << last.step << " steps to t = " << last.time << "; "
              << traj.snapshots.size() << " snapshots in " << out_dir << "\n";
    std::cout << "final: area " << last.record.area << ", perimeter " << last.record.perimeter
              << ", alpha " << last.record.reduced_area << ", angle "
              << last.record.inclination << "\n";
    return 0;
}

}  // namespace vesicle::cli
