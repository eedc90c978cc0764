#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vesicle/necklace.hpp"

namespace vesicle {

// Per-step observables written to diagnostics.csv and used by the regime and
// shape classifiers.
struct DiagnosticsRecord {
    double time = 0.0;
    double area = 0.0;
    double perimeter = 0.0;
    double reduced_area = 0.0;
    double inclination = 0.0;           // principal-axis angle in (-pi/2, pi/2]
    double inclination_unwrapped = 0.0; // nearest-branch continuation
    double aspect_ratio = 1.0;
    double max_stick_violation = 0.0;
    int uzawa_iterations = 0;
    bool polygon_simple = true;
    bool axes_degenerate = false;       // isotropic second moments, angle meaningless
};

// Ratio of the enclosed area to the area of the circle with the same
// perimeter: alpha = A / (pi R0^2) with R0 = P / (2 pi).
inline double reduced_area(const NecklaceState& state) {
    const double area = polygon_area(state);
    const double perimeter = polygon_perimeter(state);
    return 4.0 * M_PI * area / (perimeter * perimeter);
}

inline double reduced_area_from(double area, double perimeter) {
    return 4.0 * M_PI * area / (perimeter * perimeter);
}

// Orientation of the major principal axis of the center cloud, from second
// central moments, mapped to (-pi/2, pi/2]. An isotropic cloud has no defined
// axis; the angle is reported as 0 with the degeneracy flag set.
inline double inclination_angle(const NecklaceState& state, bool* degenerate = nullptr) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    Vec2 mean = Vec2::Zero();
    for (const Vec2& c : state.centers) mean += c;
    mean /= static_cast<double>(n);

    double ixx = 0.0, iyy = 0.0, ixy = 0.0;
    for (const Vec2& c : state.centers) {
        const Vec2 d = c - mean;
        ixx += d.x() * d.x();
        iyy += d.y() * d.y();
        ixy += d.x() * d.y();
    }
    const double scale = ixx + iyy;
    if (std::abs(ixx - iyy) <= 1e-12 * scale && std::abs(ixy) <= 1e-12 * scale) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    double theta = 0.5 * std::atan2(2.0 * ixy, ixx - iyy);
    if (theta <= -0.5 * M_PI) theta += M_PI;
    return theta;
}

// sqrt of the principal second-moment ratio; 1 for an isotropic cloud.
inline double aspect_ratio(const NecklaceState& state) {
    const std::size_t n = state.size();
    Vec2 mean = Vec2::Zero();
    for (const Vec2& c : state.centers) mean += c;
    mean /= static_cast<double>(n);
    double ixx = 0.0, iyy = 0.0, ixy = 0.0;
    for (const Vec2& c : state.centers) {
        const Vec2 d = c - mean;
        ixx += d.x() * d.x();
        iyy += d.y() * d.y();
        ixy += d.x() * d.y();
    }
    const double half_trace = 0.5 * (ixx + iyy);
    const double disc = std::sqrt(0.25 * (ixx - iyy) * (ixx - iyy) + ixy * ixy);
    const double lo = half_trace - disc;
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt((half_trace + disc) / lo);
}

// Continue an angle branch across the pi-periodicity of the axis angle.
inline double unwrap_next(double previous_unwrapped, double raw) {
    return raw + M_PI * std::round((previous_unwrapped - raw) / M_PI);
}

inline std::vector<double> unwrap_angles(std::span<const double> raw) {
    std::vector<double> out(raw.begin(), raw.end());
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = unwrap_next(out[k - 1], raw[k]);
    return out;
}

struct CapillaryNumbers {
    double capillary = 0.0;        // mu_out R0^3 shear / (2 k_b r)
    double bending_modulus = 0.0;  // chain-level modulus, 2 k_b r
};

inline CapillaryNumbers capillary_number(double viscosity_out, double shear_rate,
                                         double bending_stiffness, double particle_radius,
                                         double effective_radius) {
    CapillaryNumbers out;
    out.bending_modulus = 2.0 * bending_stiffness * particle_radius;
    out.capillary = viscosity_out * effective_radius * effective_radius * effective_radius *
                    shear_rate / out.bending_modulus;
    return out;
}

inline CapillaryNumbers capillary_number(double viscosity_out, double shear_rate,
                                         double bending_stiffness, double particle_radius,
                                         const NecklaceState& state) {
    const double r0 = polygon_perimeter(state) / (2.0 * M_PI);
    return capillary_number(viscosity_out, shear_rate, bending_stiffness, particle_radius, r0);
}

// Effective vesicle diameter over channel height.
inline double confinement(const NecklaceState& state, double channel_height) {
    if (!(channel_height > 0.0)) throw std::invalid_argument("confinement: channel height > 0");
    const double r0 = polygon_perimeter(state) / (2.0 * M_PI);
    return 2.0 * r0 / channel_height;
}

enum class Regime { TankTreading, Tumbling, VacillatingBreathing, Undetermined };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::TankTreading: return "TT";
        case Regime::Tumbling: return "TB";
        case Regime::VacillatingBreathing: return "VB";
        default: return "undetermined";
    }
}

struct RegimeClassification {
    Regime regime = Regime::Undetermined;
    double total_change = 0.0;          // unwrapped angle change over the series
    double final_window_stddev = 0.0;   // over the last fifth
    double final_window_mean = 0.0;
    double peak_to_peak = 0.0;          // over the last four fifths
    double oscillations = 0.0;          // full mean-crossing cycles
    double mean_rotation_rate = 0.0;    // |total change| per sample interval
};

namespace detail {

inline double deg(double radians) { return radians * 180.0 / M_PI; }
inline double rad(double degrees) { return degrees * M_PI / 180.0; }

}  // namespace detail

// Classify an unwrapped inclination-angle series.
//   TB: angle drifts monotonically through at least one half turn.
//   TT: the final fifth of the series has settled (stddev below 0.5 degrees).
//   VB: bounded, at least two full oscillations about a near-zero mean with
//       peak-to-peak above 2 degrees.
// Anything else is reported as undetermined rather than guessed.
inline RegimeClassification classify_regime(std::span<const double> unwrapped) {
    RegimeClassification out;
    const std::size_t n = unwrapped.size();
    if (n < 8) return out;

    out.total_change = unwrapped[n - 1] - unwrapped[0];
    out.mean_rotation_rate = std::abs(out.total_change) / static_cast<double>(n - 1);

    std::size_t aligned = 0, moving = 0;
    const double direction = out.total_change >= 0.0 ? 1.0 : -1.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double inc = unwrapped[k] - unwrapped[k - 1];
        if (std::abs(inc) < 1e-12) continue;
        ++moving;
        if (inc * direction > 0.0) ++aligned;
    }
    const bool monotone = moving > 0 && static_cast<double>(aligned) / moving >= 0.9;
    if (std::abs(out.total_change) >= M_PI && monotone) {
        out.regime = Regime::Tumbling;
        return out;
    }

    const std::size_t window = std::max<std::size_t>(4, n / 5);
    double mean = 0.0;
    for (std::size_t k = n - window; k < n; ++k) mean += unwrapped[k];
    mean /= static_cast<double>(window);
    double var = 0.0;
    for (std::size_t k = n - window; k < n; ++k) {
        const double d = unwrapped[k] - mean;
        var += d * d;
    }
    var /= static_cast<double>(window);
    out.final_window_mean = mean;
    out.final_window_stddev = std::sqrt(var);
    if (out.final_window_stddev < detail::rad(0.5)) {
        out.regime = Regime::TankTreading;
        return out;
    }

    // skip the initial fifth as transient
    const std::size_t start = n / 5;
    double lo = unwrapped[start], hi = unwrapped[start], osc_mean = 0.0;
    for (std::size_t k = start; k < n; ++k) {
        lo = std::min(lo, unwrapped[k]);
        hi = std::max(hi, unwrapped[k]);
        osc_mean += unwrapped[k];
    }
    osc_mean /= static_cast<double>(n - start);
    out.peak_to_peak = hi - lo;

    // mean crossings with a quarter-degree hysteresis band
    const double band = detail::rad(0.25);
    int crossings = 0, side = 0;
    for (std::size_t k = start; k < n; ++k) {
        const double d = unwrapped[k] - osc_mean;
        if (d > band) {
            if (side < 0) ++crossings;
            side = 1;
        } else if (d < -band) {
            if (side > 0) ++crossings;
            side = -1;
        }
    }
    out.oscillations = crossings / 2.0;

    const bool bounded = out.peak_to_peak < M_PI;
    if (bounded && out.oscillations >= 2.0 && out.peak_to_peak > detail::rad(2.0) &&
        std::abs(osc_mean) < M_PI / 8.0) {
        out.regime = Regime::VacillatingBreathing;
        return out;
    }
    return out;
}

inline RegimeClassification classify_regime_raw(std::span<const double> raw) {
    const std::vector<double> unwrapped = unwrap_angles(raw);
    return classify_regime(unwrapped);
}

// Signed exterior (turning) angles of the center polygon; positive at convex
// corners of a CCW polygon.
inline std::vector<double> turning_angles(const NecklaceState& state) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    std::vector<double> angles(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 before = state.centers[i] - state.centers[state.prev(i)];
        const Vec2 after = state.centers[state.next(i)] - state.centers[i];
        angles[i] = std::atan2(cross2(before, after), before.dot(after));
    }
    return angles;
}

// Number of maximal circular runs of concave vertices (turning angle below
// -threshold). 0 means convex; a biconcave profile has exactly 2.
inline int concave_arc_count(const NecklaceState& state, double threshold = 1e-3) {
    const std::vector<double> angles = turning_angles(state);
    const std::size_t n = angles.size();
    int runs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool concave = angles[i] < -threshold;
        const bool prev_concave = angles[(i + n - 1) % n] < -threshold;
        if (concave && !prev_concave) ++runs;
    }
    if (runs == 0 && angles[0] < -threshold) return 1;  // everything concave
    return runs;
}

inline bool is_convex(const NecklaceState& state, double threshold = 1e-3) {
    return concave_arc_count(state, threshold) == 0;
}

}  // namespace vesicle
