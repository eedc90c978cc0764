#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vesicle/errors.hpp"
#include "vesicle/simulation.hpp"

namespace vesicle {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': cannot parse number from '" + value + "'");
    }
    if (used != value.size())
        throw config_error("config key '" + key + "': trailing junk in '" + value + "'");
    return out;
}

inline int parse_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long out = 0;
    try {
        out = std::stol(value, &used);
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': cannot parse integer from '" + value + "'");
    }
    if (used != value.size())
        throw config_error("config key '" + key + "': trailing junk in '" + value + "'");
    return static_cast<int>(out);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on") return true;
    if (value == "0" || value == "false" || value == "off") return false;
    throw config_error("config key '" + key + "': expected a boolean, got '" + value + "'");
}

}  // namespace detail

// Parameter-table presets. The tb/vb rows leave the inner viscosity open;
// it is set through the viscosity contrast with the outer viscosity at 1.
inline ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig cfg;
    cfg.particle_radius = 1.5;
    cfg.rest_length = 3.0;
    cfg.dt = 5e-3;
    cfg.penalty = 5e-3;
    cfg.shear_rate = 1.0;

    if (name == "equilibrium") {
        cfg.kind = ScenarioKind::Equilibrium;
        cfg.particles = 42;
        cfg.bending_stiffness = 200.0;
        cfg.stretching_stiffness = 0.25;
        cfg.domain_height = 150.0;
        cfg.domain_length = 150.0;
        cfg.viscosity_in = 1.0;
        cfg.viscosity_out = 1.0;
        cfg.boundary = BoundaryProfile::Rest;
        cfg.target_reduced_area = 0.42;
        cfg.t_final = 25.0;
        cfg.nx = cfg.ny = 100;
        return cfg;
    }

    cfg.particles = 50;
    cfg.bending_stiffness = 600.0;
    cfg.stretching_stiffness = 0.5;
    cfg.domain_height = 242.0;
    cfg.domain_length = 300.0;
    cfg.viscosity_out = 1.0;
    cfg.boundary = BoundaryProfile::LinearShear;
    cfg.target_reduced_area = 0.85;
    cfg.nx = 128;
    cfg.ny = 104;

    if (name == "tt") {
        cfg.kind = ScenarioKind::TankTreading;
        cfg.viscosity_in = 1.0;
        cfg.t_final = 16.0;
    } else if (name == "tb") {
        cfg.kind = ScenarioKind::Tumbling;
        cfg.viscosity_in = 20.0;
        cfg.t_final = 11.0;
    } else if (name == "vb") {
        cfg.kind = ScenarioKind::VacillatingBreathing;
        cfg.viscosity_in = 7.5;
        cfg.t_final = 20.0;
    } else {
        throw config_error("unknown preset '" + name +
                           "' (available: equilibrium, tt, tb, vb)");
    }
    return cfg;
}

// Keys a preset owns; overriding them from a config file requires force.
// The inner viscosity stays open for tb/vb, where the contrast is the control
// parameter.
inline bool preset_pins_key(const std::string& preset, const std::string& key) {
    static const std::set<std::string> common = {"n",  "k_a",     "k_rp", "r",  "ell0",
                                                 "L",  "l",       "mu_out", "dt", "epsilon",
                                                 "gamma_dot", "boundary"};
    if (common.count(key)) return true;
    if (key == "mu_in" || key == "lambda")
        return preset == "equilibrium" || preset == "tt";
    return false;
}

inline const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "preset",    "scenario",  "n",       "k_a",         "k_rp",        "r",
        "ell0",      "L",         "l",       "mu_in",       "mu_out",      "lambda",
        "epsilon",   "dt",        "gamma_dot", "t_final",   "nx",          "ny",
        "alpha",     "output_every", "vtk",  "boundary",    "quadrature",  "uzawa_tol",
        "uzawa_max_iter", "contact_cutoff"};
    return keys;
}

inline const std::vector<std::string>& required_config_keys() {
    static const std::vector<std::string> keys = {"n", "k_a", "k_rp", "r", "L",
                                                  "l", "alpha", "t_final", "boundary"};
    return keys;
}

// Parse the plain key=value format ('#' starts a comment). Unknown keys are
// rejected. A preset key loads the corresponding parameter-table row first;
// later keys override it, which for pinned keys requires force.
inline ScenarioConfig parse_config_text(const std::string& text, bool force = false) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) +
                               ": expected key=value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (std::find(known_config_keys().begin(), known_config_keys().end(), key) ==
            known_config_keys().end())
            throw config_error("config line " + std::to_string(line_no) + ": unknown key '" +
                               key + "'");
        for (const auto& [seen, ignored] : entries)
            if (seen == key)
                throw config_error("config: duplicate key '" + key + "'");
        entries.emplace_back(key, value);
    }

    std::string preset;
    for (const auto& [key, value] : entries)
        if (key == "preset") preset = value;

    ScenarioConfig cfg;
    std::set<std::string> given;
    if (!preset.empty()) cfg = preset_config(preset);

    double lambda = 0.0;
    bool has_lambda = false;

    for (const auto& [key, value] : entries) {
        if (key == "preset") continue;
        given.insert(key);
        if (!preset.empty() && preset_pins_key(preset, key) && !force)
            throw config_error("config key '" + key + "' conflicts with preset '" + preset +
                               "'; pass --force to override");
        if (key == "scenario") {
            if (value == "equilibrium") cfg.kind = ScenarioKind::Equilibrium;
            else if (value == "tt") cfg.kind = ScenarioKind::TankTreading;
            else if (value == "tb") cfg.kind = ScenarioKind::Tumbling;
            else if (value == "vb") cfg.kind = ScenarioKind::VacillatingBreathing;
            else if (value == "custom") cfg.kind = ScenarioKind::Custom;
            else throw config_error("config: unknown scenario '" + value + "'");
        } else if (key == "n") cfg.particles = detail::parse_int(key, value);
        else if (key == "k_a") cfg.bending_stiffness = detail::parse_double(key, value);
        else if (key == "k_rp") cfg.stretching_stiffness = detail::parse_double(key, value);
        else if (key == "r") cfg.particle_radius = detail::parse_double(key, value);
        else if (key == "ell0") cfg.rest_length = detail::parse_double(key, value);
        else if (key == "L") cfg.domain_length = detail::parse_double(key, value);
        else if (key == "l") cfg.domain_height = detail::parse_double(key, value);
        else if (key == "mu_in") cfg.viscosity_in = detail::parse_double(key, value);
        else if (key == "mu_out") cfg.viscosity_out = detail::parse_double(key, value);
        else if (key == "lambda") { lambda = detail::parse_double(key, value); has_lambda = true; }
        else if (key == "epsilon") cfg.penalty = detail::parse_double(key, value);
        else if (key == "dt") cfg.dt = detail::parse_double(key, value);
        else if (key == "gamma_dot") cfg.shear_rate = detail::parse_double(key, value);
        else if (key == "t_final") cfg.t_final = detail::parse_double(key, value);
        else if (key == "nx") cfg.nx = detail::parse_int(key, value);
        else if (key == "ny") cfg.ny = detail::parse_int(key, value);
        else if (key == "alpha") cfg.target_reduced_area = detail::parse_double(key, value);
        else if (key == "output_every") cfg.output_every = detail::parse_int(key, value);
        else if (key == "vtk") cfg.write_fields = detail::parse_bool(key, value);
        else if (key == "quadrature") cfg.quadrature_points = detail::parse_int(key, value);
        else if (key == "uzawa_tol") cfg.uzawa_tol = detail::parse_double(key, value);
        else if (key == "uzawa_max_iter") cfg.uzawa_max_iter = detail::parse_int(key, value);
        else if (key == "contact_cutoff") cfg.contact_cutoff_factor = detail::parse_double(key, value);
        else if (key == "boundary") {
            if (value == "rest") cfg.boundary = BoundaryProfile::Rest;
            else if (value == "shear") cfg.boundary = BoundaryProfile::LinearShear;
            else throw config_error("config: boundary must be 'rest' or 'shear', got '" + value + "'");
        }
    }

    if (has_lambda) cfg.viscosity_in = lambda * cfg.viscosity_out;

    if (preset.empty()) {
        // defaults exist for the universal parameters; the scenario-defining
        // ones must be spelled out
        std::string missing;
        for (const std::string& key : required_config_keys())
            if (!given.count(key)) missing += missing.empty() ? key : ", " + key;
        if (!missing.empty())
            throw config_error("config: missing required keys (no preset given): " + missing);
    }

    if (!preset.empty() && given.count("r") && !given.count("ell0"))
        cfg.rest_length = 2.0 * cfg.particle_radius;
    if (preset.empty() && !given.count("ell0"))
        cfg.rest_length = 2.0 * cfg.particle_radius;

    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config_file(const std::string& path, bool force = false) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), force);
}

// Full resolved configuration as key=value text; parsing it back reproduces
// the config bit for bit.
inline std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "scenario = " << to_string(cfg.kind) << "\n";
    out << "n = " << cfg.particles << "\n";
    out << "k_a = " << detail::format_double(cfg.bending_stiffness) << "\n";
    out << "k_rp = " << detail::format_double(cfg.stretching_stiffness) << "\n";
    out << "r = " << detail::format_double(cfg.particle_radius) << "\n";
    out << "ell0 = " << detail::format_double(cfg.rest_length) << "\n";
    out << "L = " << detail::format_double(cfg.domain_length) << "\n";
    out << "l = " << detail::format_double(cfg.domain_height) << "\n";
    out << "mu_in = " << detail::format_double(cfg.viscosity_in) << "\n";
    out << "mu_out = " << detail::format_double(cfg.viscosity_out) << "\n";
    out << "epsilon = " << detail::format_double(cfg.penalty) << "\n";
    out << "dt = " << detail::format_double(cfg.dt) << "\n";
    out << "gamma_dot = " << detail::format_double(cfg.shear_rate) << "\n";
    out << "t_final = " << detail::format_double(cfg.t_final) << "\n";
    out << "nx = " << cfg.nx << "\n";
    out << "ny = " << cfg.ny << "\n";
    out << "alpha = " << detail::format_double(cfg.target_reduced_area) << "\n";
    out << "output_every = " << cfg.output_every << "\n";
    out << "vtk = " << (cfg.write_fields ? 1 : 0) << "\n";
    out << "boundary = " << (cfg.boundary == BoundaryProfile::Rest ? "rest" : "shear") << "\n";
    out << "quadrature = " << cfg.quadrature_points << "\n";
    out << "uzawa_tol = " << detail::format_double(cfg.uzawa_tol) << "\n";
    out << "uzawa_max_iter = " << cfg.uzawa_max_iter << "\n";
    out << "contact_cutoff = " << detail::format_double(cfg.contact_cutoff_factor) << "\n";
    return out.str();
}

}  // namespace vesicle
