#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "vesicle/errors.hpp"
#include "vesicle/geometry.hpp"

namespace vesicle {

// Ring of rigid circular particles representing the membrane. Particle i is
// adjacent to (i+1) mod N; all particles share one radius. Centers are kept
// in counter-clockwise order.
struct NecklaceState {
    std::vector<Vec2> centers;
    double radius = 1.0;

    std::size_t size() const { return centers.size(); }
    std::size_t next(std::size_t i) const { return (i + 1) % centers.size(); }
    std::size_t prev(std::size_t i) const { return (i + centers.size() - 1) % centers.size(); }
};

struct MembraneParams {
    double bending_stiffness = 1.0;     // angular spring constant, energy units
    double stretching_stiffness = 1.0;  // linear spring constant, energy / length^2
    double rest_length = 1.0;           // spring free length
};

// Per-particle forces split by origin. total(i) is what enters the fluid rhs.
struct ForceSet {
    std::vector<Vec2> bending;
    std::vector<Vec2> stretching;

    std::size_t size() const { return bending.size(); }
    Vec2 total(std::size_t i) const { return bending[i] + stretching[i]; }
};

namespace detail {

inline void require_valid_ring(const NecklaceState& state) {
    if (state.centers.size() < 4)
        throw std::invalid_argument("necklace needs at least 4 particles, got " +
                                    std::to_string(state.centers.size()));
    if (!(state.radius > 0.0)) throw std::invalid_argument("necklace radius must be positive");
}

// Unit edge vector i -> i+1. A vanishing edge makes the bending direction
// undefined, so it is an error rather than a clamp.
inline Vec2 unit_edge(const NecklaceState& state, std::size_t i) {
    const Vec2 d = state.centers[state.next(i)] - state.centers[i];
    const double len = d.norm();
    if (len < 1e-12 * state.radius)
        throw numerical_error("degenerate necklace edge " + std::to_string(i) +
                              ": consecutive centers coincide");
    return d / len;
}

}  // namespace detail

// Angular energy of the ring: sum over all triplets of k_b * (1 - t_i . t_{i+1})
// where t_i is the unit vector along edge i. Vanishes exactly when every
// triplet is collinear and ordered; a closed convex ring therefore carries the
// irreducible turning-angle cost.
inline double bending_energy(const NecklaceState& state, const MembraneParams& params) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    double energy = 0.0;
    Vec2 t_prev = detail::unit_edge(state, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 t = detail::unit_edge(state, i);
        energy += params.bending_stiffness * (1.0 - t_prev.dot(t));
        t_prev = t;
    }
    return energy;
}

// Elastic energy of the ring edges: sum of k_s * (len - rest)^2 over all N edges.
inline double stretching_energy(const NecklaceState& state, const MembraneParams& params) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double len = (state.centers[state.next(i)] - state.centers[i]).norm();
        const double stretch = len - params.rest_length;
        energy += params.stretching_stiffness * stretch * stretch;
    }
    return energy;
}

// Analytic negative gradient of bending_energy + stretching_energy, split by
// term. Each bending triplet loads all three of its members; each edge spring
// loads its endpoints equal-and-opposite, so both families sum to zero force
// and zero torque.
inline ForceSet membrane_forces(const NecklaceState& state, const MembraneParams& params) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    ForceSet forces;
    forces.bending.assign(n, Vec2::Zero());
    forces.stretching.assign(n, Vec2::Zero());

    // Stretching: d/dx_{i+1} (len - l0)^2 = 2 (len - l0) t, with t the unit
    // edge vector; force is the negative of that.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = state.next(i);
        const Vec2 d = state.centers[j] - state.centers[i];
        const double len = d.norm();
        if (len < 1e-12 * state.radius)
            throw numerical_error("degenerate necklace edge " + std::to_string(i) +
                                  ": consecutive centers coincide");
        const Vec2 t = d / len;
        const Vec2 pull = (2.0 * params.stretching_stiffness * (len - params.rest_length)) * t;
        forces.stretching[j] -= pull;
        forces.stretching[i] += pull;
    }

    // Bending: with a = x_i - x_{i-1}, b = x_{i+1} - x_i and c = a.b/(|a||b|),
    // the energy term is k_b (1 - c), so the force is +k_b * grad c.
    //   dc/da = (b_hat - c a_hat)/|a|,  dc/db = (a_hat - c b_hat)/|b|
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = state.prev(i), s = state.next(i);
        const Vec2 a = state.centers[i] - state.centers[p];
        const Vec2 b = state.centers[s] - state.centers[i];
        const double la = a.norm(), lb = b.norm();
        const Vec2 a_hat = a / la, b_hat = b / lb;
        const double c = a_hat.dot(b_hat);
        const Vec2 dc_da = (b_hat - c * a_hat) / la;
        const Vec2 dc_db = (a_hat - c * b_hat) / lb;
        const double k = params.bending_stiffness;
        forces.bending[p] += k * (-dc_da);
        forces.bending[i] += k * (dc_da - dc_db);
        forces.bending[s] += k * dc_db;
    }
    return forces;
}

// Shoelace area with orientation sign: positive for counter-clockwise input.
inline double signed_polygon_area(const NecklaceState& state) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) twice += cross2(state.centers[i], state.centers[state.next(i)]);
    return 0.5 * twice;
}

// Area of the center polygon, orientation-normalized. clockwise_flag, when
// given, reports that the stored order was clockwise.
inline double polygon_area(const NecklaceState& state, bool* clockwise_flag = nullptr) {
    const double signed_area = signed_polygon_area(state);
    if (clockwise_flag) *clockwise_flag = signed_area < 0.0;
    return std::abs(signed_area);
}

inline double polygon_perimeter(const NecklaceState& state) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    double perimeter = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        perimeter += (state.centers[state.next(i)] - state.centers[i]).norm();
    return perimeter;
}

// Brute-force simplicity test: no two non-incident ring edges intersect.
// Quadratic in N, intended for diagnostics at output cadence.
inline bool polygon_is_simple(const NecklaceState& state) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    auto segments_cross = [&](std::size_t i, std::size_t j) {
        const Vec2& p = state.centers[i];
        const Vec2& q = state.centers[state.next(i)];
        const Vec2& a = state.centers[j];
        const Vec2& b = state.centers[state.next(j)];
        const double d1 = cross2(q - p, a - p);
        const double d2 = cross2(q - p, b - p);
        const double d3 = cross2(b - a, p - a);
        const double d4 = cross2(b - a, q - a);
        return ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == state.next(i) || state.next(j) == i || (i == 0 && j == n - 1)) continue;
            if (segments_cross(i, j)) return false;
        }
    return true;
}

// Per-vertex area gradient: n_i = d(signed area)/d x_i, the half-sum of the
// two adjacent edge vectors rotated clockwise. For a CCW simple polygon these
// are the length-weighted outer normals, and dA = sum n_i . dx_i holds to
// first order in the displacements.
inline std::vector<Vec2> area_normals(const NecklaceState& state) {
    detail::require_valid_ring(state);
    const std::size_t n = state.size();
    std::vector<Vec2> normals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 span = state.centers[state.next(i)] - state.centers[state.prev(i)];
        normals[i] = 0.5 * perp_cw(span);
    }
    return normals;
}

struct PairGap {
    double gap;   // surface-to-surface distance, negative when overlapping
    Vec2 grad_i;  // d gap / d x_i
    Vec2 grad_j;  // d gap / d x_j
};

// Signed gap between discs i and j and its gradient with respect to both centers.
inline PairGap pair_gap(const NecklaceState& state, std::size_t i, std::size_t j) {
    if (i == j) throw std::invalid_argument("pair_gap needs two distinct particles");
    const Vec2 d = state.centers[i] - state.centers[j];
    const double dist = d.norm();
    if (dist < 1e-12 * state.radius)
        throw numerical_error("coincident disc centers " + std::to_string(i) + ", " +
                              std::to_string(j));
    const Vec2 u = d / dist;
    return PairGap{dist - 2.0 * state.radius, u, -u};
}

}  // namespace vesicle
