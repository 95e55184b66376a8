#include "soraslab/mesh.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace soras {

Mesh build_strip_mesh(int N, int ny) {
  if (N < 1) throw std::invalid_argument("build_strip_mesh: N must be >= 1");
  if (ny < 1) throw std::invalid_argument("build_strip_mesh: ny must be >= 1");
  Mesh m;
  m.ny = ny;
  m.nx = N * ny;
  m.h = 0.2 / ny;

  const int ncols = m.nx + 1, nrows = m.ny + 1;
  m.nodes.reserve(static_cast<std::size_t>(ncols) * nrows);
  m.node_grid_index.reserve(m.nodes.capacity());
  m.boundary_node.reserve(m.nodes.capacity());
  for (int row = 0; row < nrows; ++row)
    for (int col = 0; col < ncols; ++col) {
      // (0.2*k)/ny keeps grid-line coordinates exact at the strip seams
      m.nodes.push_back({(0.2 * col) / ny, (0.2 * row) / ny});
      m.node_grid_index.push_back({col, row});
      m.boundary_node.push_back(col == 0 || col == m.nx || row == 0 || row == m.ny);
    }

  m.triangles.reserve(static_cast<std::size_t>(2) * m.nx * m.ny);
  for (int row = 0; row < m.ny; ++row)
    for (int col = 0; col < m.nx; ++col) {
      const int v00 = m.node_id(col, row);
      const int v10 = m.node_id(col + 1, row);
      const int v01 = m.node_id(col, row + 1);
      const int v11 = m.node_id(col + 1, row + 1);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }
  return m;
}

double node_depth_from_segment(const Mesh& mesh, double x_interface, int node) {
  return std::abs(mesh.nodes[node][0] - x_interface);
}

double triangle_area(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.nodes[tri[0]];
  const auto& p1 = mesh.nodes[tri[1]];
  const auto& p2 = mesh.nodes[tri[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

void write_mesh_dump(const Mesh& mesh, std::ostream& out) {
  out << "nodes " << mesh.node_count() << " triangles " << mesh.triangle_count() << "\n";
  out << std::setprecision(17);
  for (int i = 0; i < mesh.node_count(); ++i)
    out << mesh.nodes[i][0] << " " << mesh.nodes[i][1] << " " << (mesh.boundary_node[i] ? 1 : 0)
        << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace soras
