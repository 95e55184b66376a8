#pragma once
#include <array>
#include <iosfwd>
#include <vector>

namespace soras {

/// Uniform triangulation of the strip rectangle [0, N*0.2] x [0, 0.2].
/// Nodes are ordered lexicographically by (row, column); each grid square
/// is split along its lower-left to upper-right diagonal, so triangles
/// 2*(row*nx+col) and 2*(row*nx+col)+1 cover square (col, row).
struct Mesh {
  int nx = 0;     // element columns
  int ny = 0;     // element rows
  double h = 0.0; // grid spacing, 0.2/ny
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary_node;
  std::vector<std::array<int, 2>> node_grid_index; // (column, row)

  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int node_id(int col, int row) const { return row * (nx + 1) + col; }
};

Mesh build_strip_mesh(int N, int ny);

// Horizontal distance |x_node - x_interface| to a vertical grid line.
double node_depth_from_segment(const Mesh& mesh, double x_interface, int node);

// Signed area of triangle t (positive for the orientation above).
double triangle_area(const Mesh& mesh, int t);

// Plain-text dump: header `nodes <n> triangles <m>`, one node per line
// `x y boundary_flag`, then one triangle per line as three node indices.
void write_mesh_dump(const Mesh& mesh, std::ostream& out);

}  // namespace soras
