#pragma once

#include <fstream>
#include <string>

#include "vesicle/errors.hpp"
#include "vesicle/mesh.hpp"
#include "vesicle/stokes.hpp"

namespace vesicle {

// Legacy-ASCII VTK dump of one solved field: nodal velocity and pressure,
// element-mean viscosity and rigid fraction from the sampled coefficients.
inline void write_vtk(const std::string& path, const FluidMesh& mesh, const FlowField& field,
                      const CoefficientFields& coeffs) {
    std::ofstream out(path);
    if (!out) throw numerical_error("cannot open '" + path + "' for writing");
    out.precision(12);

    out << "# vtk DataFile Version 3.0\n";
    out << "vesicle flow snapshot\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (const Vec2& p : mesh.nodes) out << p.x() << " " << p.y() << " 0\n";

    out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles() << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.num_triangles() << "\n";
    for (int e = 0; e < mesh.num_triangles(); ++e) out << "5\n";

    out << "POINT_DATA " << mesh.num_nodes() << "\n";
    out << "VECTORS velocity double\n";
    for (int n = 0; n < mesh.num_nodes(); ++n) {
        const Vec2 u = field.node_velocity(n);
        out << u.x() << " " << u.y() << " 0\n";
    }
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int n = 0; n < mesh.num_nodes(); ++n) out << field.pressure[n] << "\n";

    out << "CELL_DATA " << mesh.num_triangles() << "\n";
    out << "SCALARS viscosity double 1\nLOOKUP_TABLE default\n";
    const int nq = coeffs.per_element;
    for (int e = 0; e < mesh.num_triangles(); ++e) {
        double mu = 0.0;
        for (int q = 0; q < nq; ++q) mu += coeffs.viscosity[coeffs.index(e, q)];
        out << mu / nq << "\n";
    }
    out << "SCALARS rigid_fraction double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < mesh.num_triangles(); ++e) {
        double chi = 0.0;
        for (int q = 0; q < nq; ++q) chi += coeffs.rigid[coeffs.index(e, q)];
        out << chi / nq << "\n";
    }
}

}  // namespace vesicle
