#include "soraslab/decomp.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace soras {

std::vector<Strip> partition_strips(const Mesh& mesh, int N) {
  if (N < 1) throw std::invalid_argument("partition_strips: N must be >= 1");
  if (mesh.nx % N != 0)
    throw std::invalid_argument("partition_strips: nx not divisible by subdomain count");
  const int w = mesh.nx / N;
  std::vector<Strip> strips(N);
  for (int j = 0; j < N; ++j) strips[j] = {j * w, (j + 1) * w};
  return strips;
}

std::vector<Subdomain> add_overlap(const Mesh& mesh, const std::vector<Strip>& strips,
                                   int layers) {
  if (layers < 1) throw std::invalid_argument("add_overlap: layers must be >= 1");
  const int N = static_cast<int>(strips.size());
  for (const Strip& s : strips)
    if (N > 1 && 2 * layers >= s.col_end - s.col_begin)
      throw std::invalid_argument(
          "add_overlap: overlap 2*layers must be smaller than the strip width");

  std::vector<Subdomain> subs(N);
  for (int j = 0; j < N; ++j) {
    Subdomain& s = subs[j];
    s.id = j;
    s.col_begin = strips[j].col_begin;
    s.col_end = strips[j].col_end;
    if (s.col_begin > 0) {
      s.col_begin -= layers;
      s.left_interface_col = s.col_begin;
      s.left_interface_x = (0.2 * s.left_interface_col) / mesh.ny;
    }
    if (s.col_end < mesh.nx) {
      s.col_end += layers;
      s.right_interface_col = s.col_end;
      s.right_interface_x = (0.2 * s.right_interface_col) / mesh.ny;
    }

    for (int row = 0; row < mesh.ny; ++row)
      for (int col = s.col_begin; col < s.col_end; ++col) {
        const int square = row * mesh.nx + col;
        s.elements.push_back(2 * square);
        s.elements.push_back(2 * square + 1);
      }
    for (int row = 0; row <= mesh.ny; ++row)
      for (int col = s.col_begin; col <= s.col_end; ++col)
        s.nodes.push_back(mesh.node_id(col, row));
    for (int row = 1; row < mesh.ny; ++row) {
      if (s.left_interface_col >= 0)
        s.interface_nodes.push_back(mesh.node_id(s.left_interface_col, row));
      if (s.right_interface_col >= 0)
        s.interface_nodes.push_back(mesh.node_id(s.right_interface_col, row));
    }
  }
  return subs;
}

double pu_ramp_value(PuKind kind, int layers, int k) {
  const int span = 2 * layers;
  if (k >= span) return 1.0;
  if (k <= 0) return 0.0;
  if (kind == PuKind::PU2) {
    // normalized distance to the subdomain boundary, both distances capped
    // at half the overlap: chi = d_own / (d_own + d_neighbor). The two
    // complementary values share one denominator, so they sum to one in
    // floating point.
    const double own = std::min(1.0, static_cast<double>(k) / layers);
    const double other = std::min(1.0, static_cast<double>(span - k) / layers);
    return own / (own + other);
  }
  // PU1: flat at 0 / 1 except across the two central element layers
  if (k < layers) return 0.0;
  if (k == layers) return 0.5;
  return 1.0;
}

PartitionOfUnity build_pu(PuKind kind, const Mesh& mesh,
                          const std::vector<Subdomain>& subdomains, int layers) {
  PartitionOfUnity pu;
  pu.kind = kind;
  pu.d.reserve(subdomains.size());
  for (const Subdomain& s : subdomains) {
    Vector d;
    d.reserve(s.nodes.size());
    for (int id : s.nodes) {
      const int col = mesh.node_grid_index[id][0];
      double v = 1.0;
      if (s.left_interface_col >= 0 && col - s.left_interface_col < 2 * layers)
        v = pu_ramp_value(kind, layers, col - s.left_interface_col);
      else if (s.right_interface_col >= 0 && s.right_interface_col - col < 2 * layers)
        v = pu_ramp_value(kind, layers, s.right_interface_col - col);
      d.push_back(v);
    }
    pu.d.push_back(std::move(d));
  }
  return pu;
}

void write_pu_csv(const Mesh& mesh, const Subdomain& sub, const Vector& d, std::ostream& out) {
  out << "node_index,x,y,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    const int id = sub.nodes[i];
    out << id << "," << mesh.nodes[id][0] << "," << mesh.nodes[id][1] << "," << d[i] << "\n";
  }
}

}  // namespace soras
