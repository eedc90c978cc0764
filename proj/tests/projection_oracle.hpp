#pragma once

#include <Eigen/Dense>
#include <limits>
#include <random>
#include <vector>

#include "vesicle/projection.hpp"

namespace vesicle::testing {

// Independent oracle: enumerate every active set of the inequality rows (the
// equality rows are always active), solve the dense KKT system, and keep the
// candidate that is primal feasible with nonnegative multipliers.
struct BruteForceResult {
    Eigen::VectorXd velocity;
    bool found = false;
};

inline BruteForceResult brute_force_projection(const Eigen::VectorXd& target,
                                               const ConstraintSystem& sys) {
    const int k = static_cast<int>(sys.rows.size());
    const int n = sys.dofs;
    std::vector<int> inequalities, equalities;
    for (int a = 0; a < k; ++a)
        (sys.rows[a].is_equality() ? equalities : inequalities).push_back(a);

    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(k, n);
    Eigen::VectorXd gaps(k);
    for (int a = 0; a < k; ++a) {
        gaps[a] = sys.rows[a].gap;
        for (const auto& [idx, coeff] : sys.rows[a].gradient) rows(a, idx) = coeff;
    }

    BruteForceResult best;
    double best_distance = std::numeric_limits<double>::infinity();
    const int subsets = 1 << inequalities.size();
    for (int mask = 0; mask < subsets; ++mask) {
        std::vector<int> active = equalities;
        for (std::size_t b = 0; b < inequalities.size(); ++b)
            if (mask & (1 << b)) active.push_back(inequalities[b]);

        const int m = static_cast<int>(active.size());
        Eigen::VectorXd v;
        Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
        if (m == 0) {
            v = target;
        } else {
            // KKT: v = target + dt * M^T lambda with gap + dt M v = 0 on the
            // active rows -> dt^2 (M M^T) lambda = -(gap + dt M target)
            Eigen::MatrixXd m_active(m, n);
            Eigen::VectorXd g_active(m);
            for (int a = 0; a < m; ++a) {
                m_active.row(a) = rows.row(active[a]);
                g_active[a] = gaps[active[a]];
            }
            const Eigen::MatrixXd gram = sys.dt * sys.dt * m_active * m_active.transpose();
            const Eigen::VectorXd rhs = -(g_active + sys.dt * m_active * target);
            // least-squares pseudo-solve tolerates redundant rows
            lambda = gram.completeOrthogonalDecomposition().solve(rhs);
            v = target + sys.dt * m_active.transpose() * lambda;
        }

        bool ok = true;
        for (int a = 0; a < k && ok; ++a) {
            const double c = gaps[a] + sys.dt * rows.row(a).dot(v);
            if (sys.rows[a].is_equality())
                ok = std::abs(c) <= 1e-9;
            else
                ok = c >= -1e-9;
        }
        for (int a = 0; a < m && ok; ++a)
            if (!sys.rows[active[a]].is_equality()) ok = lambda[a] >= -1e-9;
        if (!ok) continue;

        const double dist = (v - target).norm();
        if (dist < best_distance) {
            best_distance = dist;
            best.velocity = v;
            best.found = true;
        }
    }
    return best;
}

// feasible-by-construction random systems: pick a feasible point first, then
// set the gaps so every row holds there. Each particle pair appears at most
// once, matching what geometric contact systems produce; duplicate pairs
// would make the dual Gram singular.
inline ConstraintSystem random_projection_system(std::mt19937& rng, int particles, int n_rows,
                                                 int n_equalities) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    ConstraintSystem sys;
    sys.dt = 0.05;
    sys.dofs = 2 * particles;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < particles; ++i)
        for (int j = i + 1; j < particles; ++j) pairs.emplace_back(i, j);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    if (n_rows > static_cast<int>(pairs.size()))
        throw std::invalid_argument("random_projection_system: more rows than particle pairs");

    Eigen::VectorXd feasible(sys.dofs);
    for (int i = 0; i < sys.dofs; ++i) feasible[i] = coeff(rng);

    for (int a = 0; a < n_rows; ++a) {
        ConstraintRow row;
        row.kind = a < n_equalities ? ConstraintKind::Stick : ConstraintKind::NonOverlap;
        const auto [i, j] = pairs[a];
        Vec2 u(coeff(rng), coeff(rng));
        if (u.norm() < 0.1) u = Vec2(1.0, 0.0);
        u.normalize();
        row.i = i;
        row.j = j;
        row.gradient = {{2 * i, u.x()}, {2 * i + 1, u.y()}, {2 * j, -u.x()}, {2 * j + 1, -u.y()}};
        double dot = 0.0;
        for (const auto& [idx, c] : row.gradient) dot += c * feasible[idx];
        if (row.is_equality())
            row.gap = -sys.dt * dot;
        else
            row.gap = -sys.dt * dot + 0.3 * std::abs(coeff(rng));
        sys.rows.push_back(row);
    }
    return sys;
}

}  // namespace vesicle::testing
