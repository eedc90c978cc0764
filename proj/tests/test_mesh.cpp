#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vesicle/mesh.hpp"
#include "vesicle/quadrature.hpp"

using namespace vesicle;

TEST_CASE("single-cell mesh") {
    const FluidMesh mesh = build_mesh(1.0, 1.0, 1, 1);
    REQUIRE(mesh.num_triangles() == 2);
    REQUIRE(mesh.num_nodes() == 4);
    CHECK(mesh.tri_area[0] + mesh.tri_area[1] == Catch::Approx(1.0));
    for (int e = 0; e < 2; ++e) CHECK(mesh.tri_area[e] > 0.0);
}

TEST_CASE("mesh partitions the rectangle") {
    const FluidMesh mesh = build_mesh(150.0, 150.0, 100, 100);
    REQUIRE(mesh.num_triangles() == 20000);
    REQUIRE(mesh.num_nodes() == 101 * 101);
    double total = 0.0;
    for (double a : mesh.tri_area) total += a;
    CHECK(total == Catch::Approx(22500.0).epsilon(1e-9));
}

TEST_CASE("boundary markers sit on the rectangle edges") {
    const FluidMesh mesh = build_mesh(3.0, 2.0, 7, 5);
    int boundary_count = 0;
    for (int n = 0; n < mesh.num_nodes(); ++n) {
        const Vec2& p = mesh.nodes[n];
        const bool on_edge = p.x() == 0.0 || p.x() == Catch::Approx(3.0) || p.y() == 0.0 ||
                             p.y() == Catch::Approx(2.0);
        CHECK(static_cast<bool>(mesh.on_boundary[n]) == on_edge);
        boundary_count += mesh.on_boundary[n];
    }
    CHECK(boundary_count == 2 * (7 + 1) + 2 * (5 + 1) - 4);
    CHECK_THROWS_AS(build_mesh(-1.0, 1.0, 4, 4), std::invalid_argument);
}

TEST_CASE("point location and barycentric coordinates agree") {
    const FluidMesh mesh = build_mesh(5.0, 3.0, 13, 9);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> ux(0.0, 5.0), uy(0.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec2 p(ux(rng), uy(rng));
        const int tri = mesh.locate(p);
        const auto bary = mesh.barycentric(tri, p);
        for (double b : bary) CHECK(b >= -1e-12);
        CHECK(bary[0] + bary[1] + bary[2] == Catch::Approx(1.0));
        const auto& t = mesh.triangles[tri];
        const Vec2 back = bary[0] * mesh.nodes[t[0]] + bary[1] * mesh.nodes[t[1]] +
                          bary[2] * mesh.nodes[t[2]];
        CHECK((back - p).norm() < 1e-12);
    }
}

TEST_CASE("quadrature rules integrate barycentric monomials exactly") {
    // on a triangle, integral of l0^a l1^b l2^c = 2A a! b! c! / (a+b+c+2)!
    const FluidMesh mesh = build_mesh(2.0, 1.0, 3, 3);
    const double area = mesh.tri_area[4];

    for (int npts : {3, 6, 7}) {
        const QuadratureRule rule = triangle_rule(npts);
        double w_total = 0.0, l0 = 0.0, l0l1 = 0.0, l0sq = 0.0;
        for (const auto& q : rule.points) {
            w_total += q.weight;
            l0 += q.weight * q.bary[0];
            l0l1 += q.weight * q.bary[0] * q.bary[1];
            l0sq += q.weight * q.bary[0] * q.bary[0];
        }
        CHECK(w_total == Catch::Approx(1.0));
        CHECK(area * l0 == Catch::Approx(area / 3.0));
        CHECK(area * l0l1 == Catch::Approx(area / 12.0));
        CHECK(area * l0sq == Catch::Approx(area / 6.0));
    }

    SECTION("degree-4+ rules catch the quartic bubble products") {
        // l0^2 l1^2 -> 2A * 2! * 2! / 6! = A / 90
        for (int npts : {6, 7}) {
            const QuadratureRule rule = triangle_rule(npts);
            double v = 0.0;
            for (const auto& q : rule.points)
                v += q.weight * q.bary[0] * q.bary[0] * q.bary[1] * q.bary[1];
            CHECK(area * v == Catch::Approx(area / 90.0).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(triangle_rule(4), std::invalid_argument);
}
