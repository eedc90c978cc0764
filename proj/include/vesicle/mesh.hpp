#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vesicle/geometry.hpp"

namespace vesicle {

// Conforming triangulation of the rectangle [0,L] x [0,l]: nx-by-ny cells,
// each split along the bottom-left to top-right diagonal. (nx+1)(ny+1) nodes,
// 2 nx ny positively oriented triangles. The mesh is built once and never
// changes while the particles move across it.
struct FluidMesh {
    double length = 0.0;  // extent along x (the paper's L)
    double height = 0.0;  // extent along y (the channel height l)
    int nx = 0, ny = 0;

    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> on_boundary;  // per node

    // precomputed per triangle
    std::vector<double> tri_area;
    std::vector<std::array<Vec2, 3>> tri_grad;  // barycentric gradients

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }

    double dx() const { return length / nx; }
    double dy() const { return height / ny; }

    // max circumdiameter; every triangle is right-angled with the cell diagonal
    // as hypotenuse
    double h() const { return std::hypot(dx(), dy()); }

    int node_id(int i, int j) const { return j * (nx + 1) + i; }

    // Triangle containing p (points outside the rectangle are clamped onto it).
    int locate(const Vec2& p) const {
        const int i = std::clamp(static_cast<int>(p.x() / dx()), 0, nx - 1);
        const int j = std::clamp(static_cast<int>(p.y() / dy()), 0, ny - 1);
        const double xi = p.x() / dx() - i;
        const double eta = p.y() / dy() - j;
        const int cell = 2 * (j * nx + i);
        return (eta <= xi) ? cell : cell + 1;
    }

    std::array<double, 3> barycentric(int tri, const Vec2& p) const {
        const auto& t = triangles[tri];
        const Vec2& a = nodes[t[0]];
        const Vec2& b = nodes[t[1]];
        const Vec2& c = nodes[t[2]];
        const double inv = 1.0 / (2.0 * tri_area[tri]);
        const double l0 = cross2(b - p, c - p) * inv;
        const double l1 = cross2(c - p, a - p) * inv;
        return {l0, l1, 1.0 - l0 - l1};
    }
};

inline FluidMesh build_mesh(double length, double height, int nx, int ny) {
    if (!(length > 0.0) || !(height > 0.0))
        throw std::invalid_argument("build_mesh: rectangle extents must be positive");
    if (nx < 1 || ny < 1) throw std::invalid_argument("build_mesh: need at least one cell per side");

    FluidMesh mesh;
    mesh.length = length;
    mesh.height = height;
    mesh.nx = nx;
    mesh.ny = ny;

    mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    mesh.on_boundary.reserve(mesh.nodes.capacity());
    const double hx = length / nx, hy = height / ny;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            mesh.nodes.emplace_back(i * hx, j * hy);
            mesh.on_boundary.push_back(i == 0 || i == nx || j == 0 || j == ny);
        }

    mesh.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int n00 = mesh.node_id(i, j), n10 = mesh.node_id(i + 1, j);
            const int n11 = mesh.node_id(i + 1, j + 1), n01 = mesh.node_id(i, j + 1);
            mesh.triangles.push_back({n00, n10, n11});  // below the diagonal
            mesh.triangles.push_back({n00, n11, n01});  // above the diagonal
        }

    mesh.tri_area.resize(mesh.triangles.size());
    mesh.tri_grad.resize(mesh.triangles.size());
    for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto& t = mesh.triangles[e];
        const Vec2& a = mesh.nodes[t[0]];
        const Vec2& b = mesh.nodes[t[1]];
        const Vec2& c = mesh.nodes[t[2]];
        const double twice = cross2(b - a, c - a);
        mesh.tri_area[e] = 0.5 * twice;
        mesh.tri_grad[e] = {perp(c - b) / twice, perp(a - c) / twice, perp(b - a) / twice};
    }
    return mesh;
}

}  // namespace vesicle
