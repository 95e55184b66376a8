#pragma once
#include <iosfwd>
#include <vector>

#include "soraslab/linalg.hpp"
#include "soraslab/mesh.hpp"

namespace soras {

// Element-column range [col_begin, col_end) of a nonoverlapping strip.
struct Strip {
  int col_begin = 0;
  int col_end = 0;
};

/// Overlapping vertical strip. `nodes` lists global node ids in ascending
/// order and doubles as the restriction map R_j; `interface_nodes` are the
/// nodes of the subdomain boundary not on the global boundary, i.e. the
/// interior rows of the bounding vertical grid lines.
struct Subdomain {
  int id = 0;
  int col_begin = 0, col_end = 0;  // element columns after overlap, [begin, end)
  int left_interface_col = -1;     // bounding node column toward a neighbor, -1 if none
  int right_interface_col = -1;
  double left_interface_x = 0.0, right_interface_x = 0.0;  // valid when col >= 0
  std::vector<int> elements;  // triangle indices, ascending
  std::vector<int> nodes;     // global node ids, ascending
  std::vector<int> interface_nodes;

  int n() const { return static_cast<int>(nodes.size()); }
};

enum class PuKind { PU1, PU2 };

/// Diagonal weights d_j per subdomain, aligned with Subdomain::nodes.
/// PU2 is the normalized distance to the subdomain boundary (distances
/// capped at half the overlap width), nonzero across the whole interior
/// of the overlap; PU1 is flat except for a ramp across the two central
/// element layers. Both are functions of the horizontal node-column
/// distance to the subdomain's own interface, drawn from one shared
/// table so that mirrored values match bitwise and complementary
/// weights sum to one.
struct PartitionOfUnity {
  PuKind kind = PuKind::PU2;
  std::vector<Vector> d;
};

std::vector<Strip> partition_strips(const Mesh& mesh, int N);

// Grow each strip by `layers` element columns on every interior side
// (total overlap width between neighbors delta = 2*layers*h). Requires
// 2*layers < strip width so overlap regions stay disjoint and every node
// has at most two owners.
std::vector<Subdomain> add_overlap(const Mesh& mesh, const std::vector<Strip>& strips,
                                   int layers);

PartitionOfUnity build_pu(PuKind kind, const Mesh& mesh,
                          const std::vector<Subdomain>& subdomains, int layers);

// Ramp value at node-column distance k from the subdomain's own interface,
// for overlap parameter `layers`; exposed for direct inspection in tests.
double pu_ramp_value(PuKind kind, int layers, int k);

// CSV dump `node_index,x,y,value` of d_j for one subdomain.
void write_pu_csv(const Mesh& mesh, const Subdomain& sub, const Vector& d, std::ostream& out);

}  // namespace soras
