#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "vesicle/config.hpp"
#include "vesicle/errors.hpp"
#include "vesicle/simulation.hpp"
#include "vesicle/version.hpp"

namespace vesicle {

// Run bookkeeping: the resolved configuration, stage timings and the output
// inventory. Written once before the first step and finalized on exit so a
// crashed run still leaves a readable marker.
struct RunManifest {
    ScenarioConfig config;
    std::string status = "running";
    std::vector<std::pair<std::string, double>> stage_seconds;
    std::vector<std::string> files;
};

inline void write_manifest(const std::string& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw numerical_error("cannot open '" + path + "' for writing");
    out << "tool = vesicle " << version_string() << "\n";
    out << "status = " << manifest.status << "\n";
    for (const auto& [stage, seconds] : manifest.stage_seconds)
        out << "seconds_" << stage << " = " << detail::format_double(seconds) << "\n";
    out << "\n[config]\n" << serialize_config(manifest.config);
    if (!manifest.files.empty()) {
        out << "\n[files]\n";
        for (const std::string& f : manifest.files) out << f << "\n";
    }
}

namespace detail {

inline std::string step_tag(long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%05ld", step);
    return buf;
}

}  // namespace detail

// Write positions_XXXXX.csv per snapshot plus diagnostics.csv, record the
// file inventory in the manifest, and (re)write manifest.txt. Percent
// variations are relative to the first row. Numbers carry 17 significant
// digits so baselines reload bit for bit.
inline std::vector<std::string> write_outputs(const Trajectory& traj, RunManifest& manifest,
                                              const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw numerical_error("cannot create output directory '" + dir + "'");

    std::vector<std::string> written;

    for (const Snapshot& snap : traj.snapshots) {
        const std::string name = "positions_" + detail::step_tag(snap.step) + ".csv";
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw numerical_error("cannot open '" + name + "' for writing");
        out << "index,x,y\n";
        for (std::size_t i = 0; i < snap.state.size(); ++i)
            out << i << "," << detail::format_double(snap.state.centers[i].x()) << ","
                << detail::format_double(snap.state.centers[i].y()) << "\n";
        written.push_back(name);
    }

    {
        std::ofstream out(fs::path(dir) / "diagnostics.csv");
        if (!out) throw numerical_error("cannot open diagnostics.csv for writing");
        out << "t,A,P,alpha,theta,theta_unwrapped,stick_violation,uzawa_iters,"
               "area_var_pct,perim_var_pct\n";
        const double area0 = traj.snapshots.empty() ? 1.0 : traj.snapshots.front().record.area;
        const double perim0 =
            traj.snapshots.empty() ? 1.0 : traj.snapshots.front().record.perimeter;
        for (const Snapshot& snap : traj.snapshots) {
            const DiagnosticsRecord& r = snap.record;
            out << detail::format_double(r.time) << "," << detail::format_double(r.area) << ","
                << detail::format_double(r.perimeter) << ","
                << detail::format_double(r.reduced_area) << ","
                << detail::format_double(r.inclination) << ","
                << detail::format_double(r.inclination_unwrapped) << ","
                << detail::format_double(r.max_stick_violation) << "," << r.uzawa_iterations
                << "," << detail::format_double(100.0 * (r.area - area0) / area0) << ","
                << detail::format_double(100.0 * (r.perimeter - perim0) / perim0) << "\n";
        }
        written.push_back("diagnostics.csv");
    }

    for (const std::string& name : written) manifest.files.push_back(name);
    manifest.files.push_back("manifest.txt");
    write_manifest((fs::path(dir) / "manifest.txt").string(), manifest);
    return written;
}

}  // namespace vesicle
