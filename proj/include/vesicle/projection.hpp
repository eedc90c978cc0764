#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "vesicle/errors.hpp"
#include "vesicle/necklace.hpp"

namespace vesicle {

enum class ConstraintKind {
    NonOverlap,  // inequality: predicted gap must stay nonnegative
    Stick,       // equality: neighbor predicted gap pinned to zero
    Area         // equality: predicted enclosed-area change matches the target
};

// One linearized row over the stacked particle velocities (vx0, vy0, vx1, ...):
// residual(V) = gap + dt * gradient . V, compared against 0.
struct ConstraintRow {
    ConstraintKind kind = ConstraintKind::NonOverlap;
    int i = -1, j = -1;  // particles involved, -1 when not a pair row
    double gap = 0.0;
    std::vector<std::pair<int, double>> gradient;

    bool is_equality() const { return kind != ConstraintKind::NonOverlap; }

    double dot(const Eigen::VectorXd& v) const {
        double s = 0.0;
        for (const auto& [idx, coeff] : gradient) s += coeff * v[idx];
        return s;
    }
};

struct ConstraintSystem {
    std::vector<ConstraintRow> rows;
    double dt = 0.0;
    int dofs = 0;

    double residual(const ConstraintRow& row, const Eigen::VectorXd& v) const {
        return row.gap + dt * row.dot(v);
    }
};

// Linearized contact rows for one step: every ring edge contributes a stick
// equality (the two opposed neighbor inequalities collapse onto gap = 0), and
// every non-adjacent pair whose gap is already below cutoff_factor * r
// contributes a non-overlap inequality. Distant pairs cannot close the gap in
// one step and are omitted to keep the system O(N).
inline ConstraintSystem build_contact_constraints(const NecklaceState& state, double dt,
                                                  double cutoff_factor = 4.0) {
    if (!(dt > 0.0)) throw std::invalid_argument("build_contact_constraints: dt must be positive");
    detail::require_valid_ring(state);

    const std::size_t n = state.size();
    ConstraintSystem sys;
    sys.dt = dt;
    sys.dofs = static_cast<int>(2 * n);

    auto make_pair_row = [&](std::size_t i, std::size_t j, ConstraintKind kind) {
        const PairGap g = pair_gap(state, i, j);
        ConstraintRow row;
        row.kind = kind;
        row.i = static_cast<int>(i);
        row.j = static_cast<int>(j);
        row.gap = g.gap;
        row.gradient = {{static_cast<int>(2 * i), g.grad_i.x()},
                        {static_cast<int>(2 * i + 1), g.grad_i.y()},
                        {static_cast<int>(2 * j), g.grad_j.x()},
                        {static_cast<int>(2 * j + 1), g.grad_j.y()}};
        return row;
    };

    for (std::size_t i = 0; i < n; ++i)
        sys.rows.push_back(make_pair_row(i, state.next(i), ConstraintKind::Stick));

    const double cutoff = cutoff_factor * state.radius;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == state.next(i) || (i == 0 && j == n - 1)) continue;
            const PairGap g = pair_gap(state, i, j);
            if (g.gap < cutoff)
                sys.rows.push_back(make_pair_row(i, j, ConstraintKind::NonOverlap));
        }
    return sys;
}

struct UzawaOptions {
    double tol = 1e-10;      // feasibility and complementarity target
    int max_iter = 10000;
    double step_scale = 1.0; // fraction of the guaranteed-stable step
};

struct ProjectionResult {
    Eigen::VectorXd velocity;
    Eigen::VectorXd multipliers;
    int iterations = 0;
    double kkt_residual = 0.0;
};

// Euclidean projection of `target` onto the polyhedron defined by the rows,
// by fixed-step dual ascent. The primal iterate is always
// V(lambda) = target + dt * sum_k lambda_k g_k; multipliers of inequality rows
// are clipped at zero. The step is 1 over the max row sum of the dual Gram
// matrix, which keeps the iteration a contraction on the dual range.
inline ProjectionResult uzawa(const Eigen::VectorXd& target, const ConstraintSystem& sys,
                              const UzawaOptions& opts = {},
                              const Eigen::VectorXd* warm_start = nullptr) {
    const int k = static_cast<int>(sys.rows.size());
    ProjectionResult result;
    if (k == 0) {
        result.velocity = target;
        result.multipliers.resize(0);
        return result;
    }

    // dual Gram: W_kl = dt^2 g_k . g_l
    Eigen::MatrixXd gram(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            double s = 0.0;
            for (const auto& [ia, ca] : sys.rows[a].gradient)
                for (const auto& [ib, cb] : sys.rows[b].gradient)
                    if (ia == ib) s += ca * cb;
            gram(a, b) = gram(b, a) = sys.dt * sys.dt * s;
        }
    const double row_sum = gram.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(row_sum > 0.0)) throw numerical_error("uzawa: all constraint gradients vanish");
    const double rho = opts.step_scale / row_sum;

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
    if (warm_start && warm_start->size() == k) lambda = *warm_start;

    Eigen::VectorXd v(sys.dofs);
    auto rebuild_primal = [&]() {
        v = target;
        for (int a = 0; a < k; ++a) {
            if (lambda[a] == 0.0) continue;
            const double s = sys.dt * lambda[a];
            for (const auto& [idx, coeff] : sys.rows[a].gradient) v[idx] += s * coeff;
        }
    };

    double feas = 0.0, comp = 0.0;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        rebuild_primal();
        feas = 0.0;
        comp = 0.0;
        for (int a = 0; a < k; ++a) {
            const double c = sys.residual(sys.rows[a], v);
            if (sys.rows[a].is_equality())
                feas = std::max(feas, std::abs(c));
            else {
                feas = std::max(feas, std::max(0.0, -c));
                comp = std::max(comp, std::abs(lambda[a] * c));
            }
        }
        if (feas <= opts.tol && comp <= opts.tol) break;
        for (int a = 0; a < k; ++a) {
            const double c = sys.residual(sys.rows[a], v);
            lambda[a] -= rho * c;
            if (!sys.rows[a].is_equality()) lambda[a] = std::max(0.0, lambda[a]);
        }
    }
    if (iter == opts.max_iter)
        throw numerical_error("uzawa: no convergence after " + std::to_string(opts.max_iter) +
                              " iterations (feasibility " + std::to_string(feas) +
                              ", complementarity " + std::to_string(comp) + ")");

    rebuild_primal();
    result.velocity = std::move(v);
    result.multipliers = std::move(lambda);
    result.iterations = iter;
    result.kkt_residual = std::max(feas, comp);
    return result;
}

inline ProjectionResult project_contacts(const Eigen::VectorXd& candidate,
                                         const ConstraintSystem& sys,
                                         const UzawaOptions& opts = {},
                                         const Eigen::VectorXd* warm_start = nullptr) {
    if (candidate.size() != sys.dofs)
        throw std::invalid_argument("project_contacts: velocity size does not match system");
    return uzawa(candidate, sys, opts, warm_start);
}

// Projection onto the single area hyperplane
//   sum_i n_i . V_i = (A_ref - A_now) / dt,
// solved in closed form: V = candidate + mu * n with n the stacked area normals.
inline Eigen::VectorXd project_area(const Eigen::VectorXd& candidate, const NecklaceState& state,
                                    double reference_area, double current_area, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("project_area: dt must be positive");
    const std::vector<Vec2> normals = area_normals(state);
    const std::size_t n = normals.size();
    if (candidate.size() != static_cast<Eigen::Index>(2 * n))
        throw std::invalid_argument("project_area: velocity size does not match state");

    Eigen::VectorXd stacked(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        stacked[2 * i] = normals[i].x();
        stacked[2 * i + 1] = normals[i].y();
    }
    const double norm2 = stacked.squaredNorm();
    if (norm2 <= 0.0)
        throw numerical_error("project_area: degenerate polygon, area gradient vanishes");

    const double rate_target = (reference_area - current_area) / dt;
    const double mu = (rate_target - stacked.dot(candidate)) / norm2;
    return candidate + mu * stacked;
}

// Post-projection diagnostic: largest violation of the stick rows by the final
// velocity. The area projection runs after the contact projection, so this is
// the price of the fixed composition order.
inline double max_stick_violation(const ConstraintSystem& sys, const Eigen::VectorXd& v) {
    double worst = 0.0;
    for (const auto& row : sys.rows)
        if (row.kind == ConstraintKind::Stick)
            worst = std::max(worst, std::abs(sys.residual(row, v)));
    return worst;
}

}  // namespace vesicle
