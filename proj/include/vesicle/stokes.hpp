#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vesicle/errors.hpp"
#include "vesicle/mesh.hpp"
#include "vesicle/necklace.hpp"
#include "vesicle/quadrature.hpp"

namespace vesicle {

enum class BoundaryProfile { Rest, LinearShear };

struct FluidParams {
    double viscosity_in = 1.0;
    double viscosity_out = 1.0;
    double penalty = 5e-3;   // rigid-motion penalty epsilon
    double shear_rate = 1.0;
    BoundaryProfile boundary = BoundaryProfile::LinearShear;

    // Dirichlet data on the whole box boundary. The shear profile is centered
    // on the channel midline so the net flux through the boundary is zero.
    Vec2 boundary_velocity(const Vec2& x, double channel_height) const {
        if (boundary == BoundaryProfile::Rest) return Vec2::Zero();
        return Vec2(shear_rate * (x.y() - 0.5 * channel_height), 0.0);
    }

    void validate() const {
        if (!(viscosity_in > 0.0) || !(viscosity_out > 0.0))
            throw std::invalid_argument("viscosities must be positive");
        if (!(penalty > 0.0)) throw std::invalid_argument("penalty epsilon must be positive");
    }

    bool penalty_is_weak() const { return penalty > 0.1; }
};

// Crossing-number test; boundary points count as inside on the left/bottom rule.
inline bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((poly[i].y() > p.y()) != (poly[j].y() > p.y())) {
            const double x_cross = poly[j].x() + (poly[i].x() - poly[j].x()) *
                                                     (p.y() - poly[j].y()) /
                                                     (poly[i].y() - poly[j].y());
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

// Viscosity, rigid indicator and body-force density sampled at every
// quadrature point of every triangle. Sampling and assembly share one rule so
// the discrete problem is exactly the quadrature-sampled penalized one.
struct CoefficientFields {
    QuadratureRule rule;
    int per_element = 0;
    std::vector<double> viscosity;      // mu_in inside the center polygon, mu_out outside
    std::vector<std::uint8_t> rigid;    // union of the discs
    std::vector<Vec2> body_force;       // sum of per-disc force densities

    std::size_t index(int element, int q) const {
        return static_cast<std::size_t>(element) * per_element + q;
    }
};

// Low-level sampler over an arbitrary disc set. interior_polygon selects the
// mu_in region and may be empty (single-phase fluid); disc_forces are total
// forces per disc, spread as constant densities over the exact disc area.
inline CoefficientFields sample_coefficients(const FluidMesh& mesh,
                                             const std::vector<Vec2>& disc_centers,
                                             double disc_radius,
                                             const std::vector<Vec2>& interior_polygon,
                                             const FluidParams& fluid,
                                             const std::vector<Vec2>& disc_forces,
                                             const QuadratureRule& rule) {
    if (!disc_centers.empty() && disc_forces.size() != disc_centers.size())
        throw std::invalid_argument("sample_coefficients: one force per disc required");

    CoefficientFields fields;
    fields.rule = rule;
    fields.per_element = static_cast<int>(rule.size());
    const std::size_t total = static_cast<std::size_t>(mesh.num_triangles()) * rule.size();
    fields.viscosity.assign(total, fluid.viscosity_out);
    fields.rigid.assign(total, 0);
    fields.body_force.assign(total, Vec2::Zero());

    const double r2 = disc_radius * disc_radius;
    const double density_scale = 1.0 / (M_PI * r2);

    for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& qp = rule.points[q];
            const Vec2 x = qp.bary[0] * mesh.nodes[t[0]] + qp.bary[1] * mesh.nodes[t[1]] +
                           qp.bary[2] * mesh.nodes[t[2]];
            const std::size_t k = fields.index(e, q);
            if (!interior_polygon.empty() && point_in_polygon(interior_polygon, x))
                fields.viscosity[k] = fluid.viscosity_in;
            for (std::size_t d = 0; d < disc_centers.size(); ++d) {
                if ((x - disc_centers[d]).squaredNorm() <= r2) {
                    fields.rigid[k] = 1;
                    fields.body_force[k] += density_scale * disc_forces[d];
                }
            }
        }
    }
    return fields;
}

inline CoefficientFields sample_coefficients(const FluidMesh& mesh, const NecklaceState& state,
                                             const FluidParams& fluid, const ForceSet& forces,
                                             const QuadratureRule& rule = triangle_rule(7)) {
    std::vector<Vec2> totals(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) totals[i] = forces.total(i);
    return sample_coefficients(mesh, state.centers, state.radius, state.centers, fluid, totals,
                               rule);
}

// Discrete solution of the penalized Stokes problem. Velocity lives in the
// P1+bubble space (nodal part interleaved ux,uy plus two bubble amplitudes
// per triangle), pressure in P1 with zero mean.
struct FlowField {
    Eigen::VectorXd nodal_velocity;  // 2 * num_nodes
    Eigen::VectorXd bubble;          // 2 * num_triangles
    Eigen::VectorXd pressure;        // num_nodes
    double solve_residual = 0.0;

    Vec2 node_velocity(int node) const {
        return Vec2(nodal_velocity[2 * node], nodal_velocity[2 * node + 1]);
    }

    Vec2 velocity_at(const FluidMesh& mesh, int tri, const std::array<double, 3>& bary) const {
        const auto& t = mesh.triangles[tri];
        Vec2 u = Vec2::Zero();
        for (int k = 0; k < 3; ++k) u += bary[k] * node_velocity(t[k]);
        const double beta = 27.0 * bary[0] * bary[1] * bary[2];
        u += beta * Vec2(bubble[2 * tri], bubble[2 * tri + 1]);
        return u;
    }

    Eigen::Matrix2d velocity_gradient_at(const FluidMesh& mesh, int tri,
                                         const std::array<double, 3>& bary) const {
        const auto& t = mesh.triangles[tri];
        const auto& g = mesh.tri_grad[tri];
        Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
        for (int k = 0; k < 3; ++k) grad += node_velocity(t[k]) * g[k].transpose();
        const Vec2 gb = 27.0 * (bary[1] * bary[2] * g[0] + bary[0] * bary[2] * g[1] +
                                bary[0] * bary[1] * g[2]);
        grad += Vec2(bubble[2 * tri], bubble[2 * tri + 1]) * gb.transpose();
        return grad;
    }
};

namespace detail {

// Element-level data needed to reconstruct the condensed bubble amplitudes:
// b = Abb^{-1} (fb - Avb^T v + Gb^T p).
struct BubbleRecovery {
    Eigen::Matrix2d abb_inv;
    Eigen::Matrix<double, 2, 6> avb_t;  // velocity coupling
    Eigen::Matrix<double, 2, 3> gb_t;   // pressure coupling
    Eigen::Vector2d fb;
};

}  // namespace detail

// Statically condensed saddle-point system over nodal velocities and nodal
// pressures. The pressure gauge (the divergence rows sum to zero for
// flux-free boundary data, so constants are in play) is fixed by pinning one
// pressure dof; the solution is shifted to exact zero mean afterwards, which
// is the same field the zero-mean-constrained problem has. A Lagrange
// multiplier would add a dense row that ruins sparse factorization.
struct AssembledSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    int velocity_dofs = 0;
    int pressure_dofs = 0;
    std::vector<std::uint8_t> fixed;  // per dof: Dirichlet velocity or gauge pressure
    Eigen::VectorXd fixed_value;
    std::vector<detail::BubbleRecovery> recovery;

    int total_dofs() const { return velocity_dofs + pressure_dofs; }
};

inline AssembledSystem assemble_system(const FluidMesh& mesh, const CoefficientFields& coeffs,
                                       const FluidParams& fluid, bool apply_dirichlet = true) {
    fluid.validate();
    const int nv = mesh.num_nodes();
    const int ne = mesh.num_triangles();
    const int n_vel = 2 * nv;
    const int n_total = n_vel + nv;

    AssembledSystem sys;
    sys.velocity_dofs = n_vel;
    sys.pressure_dofs = nv;
    sys.rhs = Eigen::VectorXd::Zero(n_total);
    sys.recovery.resize(ne);

    sys.fixed.assign(n_total, 0);
    sys.fixed_value = Eigen::VectorXd::Zero(n_total);
    if (apply_dirichlet) {
        for (int node = 0; node < nv; ++node) {
            if (!mesh.on_boundary[node]) continue;
            const Vec2 g = fluid.boundary_velocity(mesh.nodes[node], mesh.height);
            sys.fixed[2 * node] = sys.fixed[2 * node + 1] = 1;
            sys.fixed_value[2 * node] = g.x();
            sys.fixed_value[2 * node + 1] = g.y();
        }
    }
    sys.fixed[n_vel] = 1;  // pressure gauge at node 0

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(ne) * 120 + n_total);

    auto push = [&](int row, int col, double value) {
        if (sys.fixed[row]) return;
        if (sys.fixed[col]) {
            sys.rhs[row] -= value * sys.fixed_value[col];
            return;
        }
        triplets.emplace_back(row, col, value);
    };

    const double inv_eps = 1.0 / fluid.penalty;
    const auto& rule = coeffs.rule;
    const int nq = coeffs.per_element;

    // scratch element blocks
    Eigen::Matrix<double, 6, 6> avv;
    Eigen::Matrix<double, 6, 2> avb;
    Eigen::Matrix2d abb;
    Eigen::Matrix<double, 3, 6> gv;
    Eigen::Matrix<double, 3, 2> gb;
    Eigen::Matrix<double, 6, 1> fv;
    Eigen::Vector2d fb;

    for (int e = 0; e < ne; ++e) {
        const auto& t = mesh.triangles[e];
        const auto& g = mesh.tri_grad[e];
        const double area = mesh.tri_area[e];

        avv.setZero();
        avb.setZero();
        abb.setZero();
        gv.setZero();
        gb.setZero();
        fv.setZero();
        fb.setZero();

        // pressure-velocity coupling of the P1 part is exact: grad(phi) constant,
        // integral of each pressure hat = area/3
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int a = 0; a < 2; ++a) gv(k, 2 * i + a) = g[i][a] * area / 3.0;

        double visc_weight = 0.0;  // integral of 2*mu_eff over the element
        for (int q = 0; q < nq; ++q) {
            const auto& qp = rule.points[q];
            const double w = qp.weight * area;
            const std::size_t idx = coeffs.index(e, q);
            const double mu_eff = coeffs.viscosity[idx] + (coeffs.rigid[idx] ? inv_eps : 0.0);
            visc_weight += 2.0 * w * mu_eff;

            const Vec2 gbq = 27.0 * (qp.bary[1] * qp.bary[2] * g[0] +
                                     qp.bary[0] * qp.bary[2] * g[1] +
                                     qp.bary[0] * qp.bary[1] * g[2]);
            const double beta = 27.0 * qp.bary[0] * qp.bary[1] * qp.bary[2];

            // sym(e_a x gi) : sym(e_b x gj) = 0.5 * (d_ab gi.gj + gi[b] gj[a])
            for (int i = 0; i < 3; ++i)
                for (int a = 0; a < 2; ++a) {
                    const double common = g[i].dot(gbq);
                    for (int b = 0; b < 2; ++b) {
                        const double entry =
                            0.5 * ((a == b ? common : 0.0) + g[i][b] * gbq[a]);
                        avb(2 * i + a, b) += 2.0 * w * mu_eff * entry;
                    }
                }
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    abb(a, b) += w * mu_eff * ((a == b ? gbq.squaredNorm() : 0.0) + gbq[a] * gbq[b]);

            for (int k = 0; k < 3; ++k)
                for (int a = 0; a < 2; ++a) gb(k, a) += w * qp.bary[k] * gbq[a];

            const Vec2& f = coeffs.body_force[idx];
            for (int i = 0; i < 3; ++i)
                for (int a = 0; a < 2; ++a) fv(2 * i + a) += w * f[a] * qp.bary[i];
            for (int a = 0; a < 2; ++a) fb(a) += w * f[a] * beta;
        }

        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 2; ++a)
                for (int j = 0; j < 3; ++j)
                    for (int b = 0; b < 2; ++b)
                        avv(2 * i + a, 2 * j + b) =
                            visc_weight * 0.5 * ((a == b ? g[i].dot(g[j]) : 0.0) + g[i][b] * g[j][a]);

        // condense the bubble pair out of the element system
        const Eigen::Matrix2d abb_inv = abb.inverse();
        const Eigen::Matrix<double, 6, 6> svv = avv - avb * abb_inv * avb.transpose();
        const Eigen::Matrix<double, 3, 6> tmod = gv - gb * abb_inv * avb.transpose();
        const Eigen::Matrix3d cpp = gb * abb_inv * gb.transpose();
        const Eigen::Matrix<double, 6, 1> rhs_v = fv - avb * abb_inv * fb;
        const Eigen::Vector3d rhs_p = gb * abb_inv * fb;

        auto& rec = sys.recovery[e];
        rec.abb_inv = abb_inv;
        rec.avb_t = avb.transpose();
        rec.gb_t = gb.transpose();
        rec.fb = fb;

        int vdof[6], pdof[3];
        for (int i = 0; i < 3; ++i) {
            vdof[2 * i] = 2 * t[i];
            vdof[2 * i + 1] = 2 * t[i] + 1;
            pdof[i] = n_vel + t[i];
        }

        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) push(vdof[i], vdof[j], svv(i, j));
            for (int k = 0; k < 3; ++k) {
                push(vdof[i], pdof[k], -tmod(k, i));
                push(pdof[k], vdof[i], -tmod(k, i));
            }
            if (!sys.fixed[vdof[i]]) sys.rhs[vdof[i]] += rhs_v(i);
        }
        for (int k = 0; k < 3; ++k) {
            for (int m = 0; m < 3; ++m) push(pdof[k], pdof[m], -cpp(k, m));
            if (!sys.fixed[pdof[k]]) sys.rhs[pdof[k]] += rhs_p(k);
        }
    }

    for (int d = 0; d < n_total; ++d) {
        if (!sys.fixed[d]) continue;
        triplets.emplace_back(d, d, 1.0);
        sys.rhs[d] = sys.fixed_value[d];
    }

    sys.matrix.resize(n_total, n_total);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return sys;
}

// Direct sparse factorization of the condensed saddle system. The matrix is
// symmetric quasi-definite after gauge fixing, so an unpivoted LDLT applies;
// a pivoting LU stands by in case a configuration produces a bad pivot. The
// sparsity pattern depends only on the mesh, so the symbolic analysis is done
// once and reused across time steps.
class StokesSolver {
public:
    FlowField solve(const FluidMesh& mesh, const CoefficientFields& coeffs,
                    const FluidParams& fluid) {
        AssembledSystem sys = assemble_system(mesh, coeffs, fluid);
        if (!analyzed_) {
            ldlt_.analyzePattern(sys.matrix);
            analyzed_ = true;
        }

        const double rhs_norm = sys.rhs.norm();
        Eigen::VectorXd x;
        double rel = std::numeric_limits<double>::infinity();

        ldlt_.factorize(sys.matrix);
        if (ldlt_.info() == Eigen::Success) {
            x = ldlt_.solve(sys.rhs);
            rel = (sys.matrix * x - sys.rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
        }
        if (!(rel <= 1e-9)) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.analyzePattern(sys.matrix);
            lu.factorize(sys.matrix);
            if (lu.info() != Eigen::Success)
                throw numerical_error("Stokes solve failed: sparse factorization reported " +
                                      std::string(lu.info() == Eigen::NumericalIssue
                                                      ? "a numerical issue (singular system?)"
                                                      : "an internal error"));
            x = lu.solve(sys.rhs);
            rel = (sys.matrix * x - sys.rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
            if (!(rel <= 1e-9))
                throw numerical_error("Stokes solve failed: relative residual " +
                                      std::to_string(rel) +
                                      " exceeds 1e-9 (ill-conditioned system)");
        }

        FlowField field;
        field.solve_residual = rel;
        field.nodal_velocity = x.head(sys.velocity_dofs);
        field.pressure = x.segment(sys.velocity_dofs, sys.pressure_dofs);

        // shift to the zero-mean representative (a constant is in the kernel
        // of the velocity equations, so this changes nothing else)
        double p_mass = 0.0, domain_area = 0.0;
        for (int e = 0; e < mesh.num_triangles(); ++e) {
            const auto& t = mesh.triangles[e];
            domain_area += mesh.tri_area[e];
            for (int k = 0; k < 3; ++k)
                p_mass += mesh.tri_area[e] / 3.0 * field.pressure[t[k]];
        }
        field.pressure.array() -= p_mass / domain_area;

        // element-by-element bubble recovery
        const int ne = mesh.num_triangles();
        field.bubble.resize(2 * ne);
        Eigen::Matrix<double, 6, 1> vloc;
        Eigen::Vector3d ploc;
        for (int e = 0; e < ne; ++e) {
            const auto& t = mesh.triangles[e];
            for (int i = 0; i < 3; ++i) {
                vloc(2 * i) = field.nodal_velocity[2 * t[i]];
                vloc(2 * i + 1) = field.nodal_velocity[2 * t[i] + 1];
                ploc(i) = field.pressure[t[i]];
            }
            const auto& rec = sys.recovery[e];
            const Eigen::Vector2d b =
                rec.abb_inv * (rec.fb - rec.avb_t * vloc + rec.gb_t * ploc);
            field.bubble[2 * e] = b(0);
            field.bubble[2 * e + 1] = b(1);
        }
        return field;
    }

private:
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    bool analyzed_ = false;
};

inline FlowField assemble_and_solve(const FluidMesh& mesh, const CoefficientFields& coeffs,
                                    const FluidParams& fluid) {
    StokesSolver solver;
    return solver.solve(mesh, coeffs, fluid);
}

// Mean fluid velocity over each disc. The disc measure is the quadrature
// measure of the sampled indicator, so any field that is constant over the
// covered points is averaged exactly.
inline std::vector<Vec2> particle_velocities(const FlowField& field, const FluidMesh& mesh,
                                             const NecklaceState& state,
                                             const QuadratureRule& rule) {
    const double r2 = state.radius * state.radius;
    std::vector<Vec2> sums(state.size(), Vec2::Zero());
    std::vector<double> measures(state.size(), 0.0);

    for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& qp = rule.points[q];
            const Vec2 x = qp.bary[0] * mesh.nodes[t[0]] + qp.bary[1] * mesh.nodes[t[1]] +
                           qp.bary[2] * mesh.nodes[t[2]];
            bool cached = false;
            Vec2 u = Vec2::Zero();
            for (std::size_t d = 0; d < state.size(); ++d) {
                if ((x - state.centers[d]).squaredNorm() > r2) continue;
                if (!cached) {
                    u = field.velocity_at(mesh, e, qp.bary);
                    cached = true;
                }
                const double w = qp.weight * mesh.tri_area[e];
                sums[d] += w * u;
                measures[d] += w;
            }
        }
    }

    std::vector<Vec2> velocities(state.size());
    for (std::size_t d = 0; d < state.size(); ++d) {
        if (measures[d] <= 0.0)
            throw numerical_error("disc " + std::to_string(d) +
                                  " covers no quadrature points; refine the mesh so h < r");
        velocities[d] = sums[d] / measures[d];
    }
    return velocities;
}

// Angular velocity estimate per disc (diagnostic only; centers fully determine
// the geometry): omega = int (x-c)^perp . u / int |x-c|^2 over the covered points.
inline std::vector<double> particle_angular_velocities(const FlowField& field,
                                                       const FluidMesh& mesh,
                                                       const NecklaceState& state,
                                                       const QuadratureRule& rule) {
    const double r2 = state.radius * state.radius;
    std::vector<double> num(state.size(), 0.0), den(state.size(), 0.0);
    for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& qp = rule.points[q];
            const Vec2 x = qp.bary[0] * mesh.nodes[t[0]] + qp.bary[1] * mesh.nodes[t[1]] +
                           qp.bary[2] * mesh.nodes[t[2]];
            for (std::size_t d = 0; d < state.size(); ++d) {
                const Vec2 rel = x - state.centers[d];
                if (rel.squaredNorm() > r2) continue;
                const double w = qp.weight * mesh.tri_area[e];
                num[d] += w * perp(rel).dot(field.velocity_at(mesh, e, qp.bary));
                den[d] += w * rel.squaredNorm();
            }
        }
    }
    std::vector<double> omega(state.size(), 0.0);
    for (std::size_t d = 0; d < state.size(); ++d)
        if (den[d] > 0.0) omega[d] = num[d] / den[d];
    return omega;
}

// L2 norm of the deformation tensor over the union of discs, evaluated with
// the assembly quadrature; the penalty drives this to zero linearly in eps.
inline double deformation_norm_in_rigid(const FlowField& field, const FluidMesh& mesh,
                                        const std::vector<Vec2>& disc_centers, double disc_radius,
                                        const QuadratureRule& rule) {
    const double r2 = disc_radius * disc_radius;
    double total = 0.0;
    for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& qp = rule.points[q];
            const Vec2 x = qp.bary[0] * mesh.nodes[t[0]] + qp.bary[1] * mesh.nodes[t[1]] +
                           qp.bary[2] * mesh.nodes[t[2]];
            bool covered = false;
            for (const Vec2& c : disc_centers)
                if ((x - c).squaredNorm() <= r2) {
                    covered = true;
                    break;
                }
            if (!covered) continue;
            const Eigen::Matrix2d grad = field.velocity_gradient_at(mesh, e, qp.bary);
            const Eigen::Matrix2d def = 0.5 * (grad + grad.transpose());
            total += qp.weight * mesh.tri_area[e] * def.squaredNorm();
        }
    }
    return std::sqrt(total);
}

// Residuals of the discrete incompressibility rows, one per pressure basis
// function, evaluated on the full velocity (nodal + recovered bubbles).
inline Eigen::VectorXd divergence_residuals(const FlowField& field, const FluidMesh& mesh,
                                            const QuadratureRule& rule) {
    Eigen::VectorXd res = Eigen::VectorXd::Zero(mesh.num_nodes());
    for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        const auto& g = mesh.tri_grad[e];
        double div_p1 = 0.0;
        for (int k = 0; k < 3; ++k) div_p1 += field.node_velocity(t[k]).dot(g[k]);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& qp = rule.points[q];
            const double w = qp.weight * mesh.tri_area[e];
            const Vec2 gbq = 27.0 * (qp.bary[1] * qp.bary[2] * g[0] +
                                     qp.bary[0] * qp.bary[2] * g[1] +
                                     qp.bary[0] * qp.bary[1] * g[2]);
            const double div =
                div_p1 + Vec2(field.bubble[2 * e], field.bubble[2 * e + 1]).dot(gbq);
            for (int k = 0; k < 3; ++k) res[t[k]] += w * qp.bary[k] * div;
        }
    }
    return res;
}

}  // namespace vesicle
