#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "soraslab/decomp.hpp"
#include "soraslab/mesh.hpp"

using namespace soras;

namespace {

// sum of all subdomain weights at every global node
Vector pu_row_sums(const Mesh& mesh, const std::vector<Subdomain>& subs,
                   const PartitionOfUnity& pu) {
  Vector sum(mesh.node_count(), 0.0);
  for (std::size_t j = 0; j < subs.size(); ++j)
    for (std::size_t i = 0; i < subs[j].nodes.size(); ++i) sum[subs[j].nodes[i]] += pu.d[j][i];
  return sum;
}

}  // namespace

TEST_CASE("strips split element columns evenly") {
  const Mesh m = build_strip_mesh(5, 60);
  const auto strips = partition_strips(m, 5);
  REQUIRE(strips.size() == 5);
  for (int j = 0; j < 5; ++j) {
    CHECK(strips[j].col_begin == j * 60);
    CHECK(strips[j].col_end == (j + 1) * 60);
  }
  const Mesh single = build_strip_mesh(1, 4);
  CHECK(partition_strips(single, 1).size() == 1);
  const Mesh tiny = build_strip_mesh(2, 2);  // nx = 4
  const auto two = partition_strips(tiny, 2);
  CHECK(two[0].col_end == 2);
  CHECK(two[1].col_begin == 2);
}

TEST_CASE("indivisible strip counts are rejected") {
  const Mesh m = build_strip_mesh(1, 10);  // nx = 10
  CHECK_THROWS(partition_strips(m, 3));
  CHECK_THROWS(partition_strips(m, 0));
}

TEST_CASE("one layer of overlap on an eight column mesh, by hand") {
  const Mesh m = build_strip_mesh(2, 4);  // nx = 8, strips 0..3 and 4..7
  const auto subs = add_overlap(m, partition_strips(m, 2), 1);
  REQUIRE(subs.size() == 2);
  const Subdomain& a = subs[0];
  const Subdomain& b = subs[1];
  CHECK(a.col_begin == 0);
  CHECK(a.col_end == 5);  // grew one column to the right
  CHECK(a.left_interface_col == -1);
  CHECK(a.right_interface_col == 5);
  CHECK(b.col_begin == 3);
  CHECK(b.left_interface_col == 3);
  CHECK(b.right_interface_col == -1);
  CHECK(a.elements.size() == 2 * 5 * 4);
  CHECK(a.nodes.size() == 6 * 5);
  // interface nodes: interior rows of the bounding column
  REQUIRE(a.interface_nodes.size() == 3);
  for (int row = 1; row < 4; ++row)
    CHECK(a.interface_nodes[row - 1] == m.node_id(5, row));
  CHECK(a.right_interface_x == doctest::Approx((0.2 * 5) / 4).epsilon(1e-16));
  // every node belongs to some subdomain
  std::vector<char> seen(m.node_count(), 0);
  for (const auto& s : subs)
    for (int id : s.nodes) seen[id] = 1;
  CHECK(std::count(seen.begin(), seen.end(), 1) == m.node_count());
}

TEST_CASE("overlap wider than the strip is rejected") {
  const Mesh m = build_strip_mesh(2, 2);  // strips two columns wide
  const auto strips = partition_strips(m, 2);
  CHECK_THROWS(add_overlap(m, strips, 1));
  CHECK_THROWS(add_overlap(m, strips, 3));
}

TEST_CASE("single subdomain stays untouched with no interfaces") {
  const Mesh m = build_strip_mesh(1, 4);
  const auto subs = add_overlap(m, partition_strips(m, 1), 2);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].col_begin == 0);
  CHECK(subs[0].col_end == m.nx);
  CHECK(subs[0].left_interface_col == -1);
  CHECK(subs[0].right_interface_col == -1);
  CHECK(subs[0].interface_nodes.empty());
  const auto pu = build_pu(PuKind::PU1, m, subs, 2);
  for (double v : pu.d[0]) CHECK(v == 1.0);
}

TEST_CASE("ramp tables hold the documented nodal values") {
  // overlap of four layers, distances 0..4 from the subdomain's interface
  CHECK(pu_ramp_value(PuKind::PU2, 2, 0) == 0.0);
  CHECK(pu_ramp_value(PuKind::PU2, 2, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(pu_ramp_value(PuKind::PU2, 2, 2) == 0.5);
  CHECK(pu_ramp_value(PuKind::PU2, 2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-16));
  CHECK(pu_ramp_value(PuKind::PU2, 2, 4) == 1.0);
  CHECK(pu_ramp_value(PuKind::PU1, 2, 0) == 0.0);
  CHECK(pu_ramp_value(PuKind::PU1, 2, 1) == 0.0);
  CHECK(pu_ramp_value(PuKind::PU1, 2, 2) == 0.5);
  CHECK(pu_ramp_value(PuKind::PU1, 2, 3) == 1.0);
  CHECK(pu_ramp_value(PuKind::PU1, 2, 4) == 1.0);
  // complementary distances pair to one, bitwise
  for (int layers : {1, 2, 3, 4})
    for (int k = 0; k <= 2 * layers; ++k)
      for (PuKind kind : {PuKind::PU1, PuKind::PU2})
        CHECK(pu_ramp_value(kind, layers, k) + pu_ramp_value(kind, layers, 2 * layers - k) == 1.0);
}

TEST_CASE("both partitions of unity sum to one at every node") {
  for (const int N : {2, 3, 5})
    for (const int layers : {1, 2, 3})
      for (const PuKind kind : {PuKind::PU1, PuKind::PU2}) {
        const Mesh m = build_strip_mesh(N, 12);
        const auto subs = add_overlap(m, partition_strips(m, N), layers);
        const auto pu = build_pu(kind, m, subs, layers);
        const Vector sums = pu_row_sums(m, subs, pu);
        for (double s : sums) CHECK(std::fabs(s - 1.0) <= 1e-14);
      }
}

TEST_CASE("weights stay inside the unit interval and vanish on interfaces") {
  const Mesh m = build_strip_mesh(4, 10);
  const auto subs = add_overlap(m, partition_strips(m, 4), 2);
  for (const PuKind kind : {PuKind::PU1, PuKind::PU2}) {
    const auto pu = build_pu(kind, m, subs, 2);
    for (std::size_t j = 0; j < subs.size(); ++j) {
      for (double v : pu.d[j]) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      for (int id : subs[j].interface_nodes) {
        const auto it = std::lower_bound(subs[j].nodes.begin(), subs[j].nodes.end(), id);
        const std::size_t k = static_cast<std::size_t>(it - subs[j].nodes.begin());
        CHECK(pu.d[j][k] == 0.0);
      }
    }
  }
}

TEST_CASE("narrowest overlap makes the two kinds identical") {
  const Mesh m = build_strip_mesh(3, 8);
  const auto subs = add_overlap(m, partition_strips(m, 3), 1);
  const auto p1 = build_pu(PuKind::PU1, m, subs, 1);
  const auto p2 = build_pu(PuKind::PU2, m, subs, 1);
  for (std::size_t j = 0; j < subs.size(); ++j) CHECK(p1.d[j] == p2.d[j]);
}

TEST_CASE("first kind is flat beside the interface for wide overlaps") {
  const Mesh m = build_strip_mesh(2, 12);
  const auto subs = add_overlap(m, partition_strips(m, 2), 2);
  const auto pu = build_pu(PuKind::PU1, m, subs, 2);
  // subdomain 0: interface at its right column, the adjacent layer inward
  // must also carry zero weight
  const int iface = subs[0].right_interface_col;
  for (std::size_t i = 0; i < subs[0].nodes.size(); ++i) {
    const int col = m.node_grid_index[subs[0].nodes[i]][0];
    if (col == iface || col == iface - 1) CHECK(pu.d[0][i] == 0.0);
  }
}

TEST_CASE("second kind is positive strictly inside the overlap") {
  const Mesh m = build_strip_mesh(2, 12);
  const auto subs = add_overlap(m, partition_strips(m, 2), 3);
  const auto pu = build_pu(PuKind::PU2, m, subs, 3);
  const int iface = subs[0].right_interface_col;
  for (std::size_t i = 0; i < subs[0].nodes.size(); ++i) {
    const int col = m.node_grid_index[subs[0].nodes[i]][0];
    if (col > iface - 6 && col < iface) CHECK(pu.d[0][i] > 0.0);
  }
}

TEST_CASE("mirrored subdomains carry mirrored weights") {
  const Mesh m = build_strip_mesh(2, 10);
  const auto subs = add_overlap(m, partition_strips(m, 2), 2);
  for (const PuKind kind : {PuKind::PU1, PuKind::PU2}) {
    const auto pu = build_pu(kind, m, subs, 2);
    REQUIRE(pu.d[0].size() == pu.d[1].size());
    // reflecting column c -> nx - c maps subdomain 0 onto subdomain 1
    const int cols = subs[0].col_end - subs[0].col_begin + 1;
    for (int row = 0; row <= m.ny; ++row)
      for (int c = 0; c < cols; ++c) {
        const std::size_t i0 = static_cast<std::size_t>(row) * cols + c;
        const std::size_t i1 = static_cast<std::size_t>(row) * cols + (cols - 1 - c);
        CHECK(pu.d[0][i0] == pu.d[1][i1]);
      }
  }
}

TEST_CASE("weight dump starts with the documented header") {
  const Mesh m = build_strip_mesh(2, 4);
  const auto subs = add_overlap(m, partition_strips(m, 2), 1);
  const auto pu = build_pu(PuKind::PU2, m, subs, 1);
  std::stringstream out;
  write_pu_csv(m, subs[0], pu.d[0], out);
  std::string header;
  std::getline(out, header);
  CHECK(header == "node_index,x,y,value");
  int lines = 0;
  for (std::string line; std::getline(out, line);) ++lines;
  CHECK(lines == static_cast<int>(subs[0].nodes.size()));
}
