#pragma once

#include <cstdint>
#include <vector>

#include "hyp/constants.hpp"
#include "hyp/subgroup.hpp"

namespace hyp {

enum class Region { Below, Annulus, Above };

struct PointClass {
  Region region = Region::Below;
  bool on_CK = false;
  int height = 0;
};

PointClass classify_point(const SubgroupView& v, const ConstantLedger& g, Vertex x);

// Finite subgraph of the ball inside N_{r,R}(H) with its induced edges.
struct FiniteCover {
  std::vector<Vertex> vertices;                  // sorted
  std::vector<int> heights;                      // parallel to vertices
  std::vector<int> comp;                         // parallel to vertices
  std::vector<std::vector<Vertex>> components;   // ordered by least vertex
  std::vector<char> marked;                      // component meets C_K
  std::vector<Vertex> basepoints;
  int generation = 0;
  int r = 0, K = 0, R = 0;

  std::size_t size() const { return vertices.size(); }
  int index_of(Vertex v) const;       // -1 when absent
  int component_of(Vertex v) const;   // -1 when absent
  int marked_count() const;
};

// Builds components and marks for a vertex set already known to lie in
// N_{r,R}(H).
FiniteCover make_cover(const SubgroupView& v, const ConstantLedger& g, std::vector<Vertex> vertices,
                       std::vector<Vertex> basepoints, int generation);

// N_{r,R}(H) ∩ B_{2l+R}(x).
FiniteCover build_cover(const SubgroupView& v, const ConstantLedger& g, Vertex x);

// Points of N_{r,R}(H) having 1 as a nearest point of H, together with their
// neighbours inside N_{r,R}(H).  Every edge of N_{r,R}(H) is an H-translate of
// an edge of this cover, and it lies in B_{R+1}.
FiniteCover minimal_cover(const SubgroupView& v, const ConstantLedger& g);

// F ∪ Y F with Y the symmetrized generators.
FiniteCover grow_cover(const FiniteCover& F, const SubgroupView& v, const ConstantLedger& g);

bool in_arrk(const SubgroupView& v, const ConstantLedger& g, Vertex x);

// Largest radius of the ball needed by build_cover at x.
int cover_radius_needed(const SubgroupView& v, const ConstantLedger& g, Vertex x);

const char* region_name(Region r);

}  // namespace hyp
