#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyp/annulus.hpp"
#include "hyp/subgroup.hpp"

namespace hyp {

// An element of H carried both as a Y-word and as its freely reduced G-word.
struct HElement {
  YWord y;
  Word g;
};

HElement make_element(const SubgroupContext& ctx, const YWord& y);
HElement multiply(const SubgroupContext& ctx, const HElement& a, const HElement& b);
HElement invert(const SubgroupContext& ctx, const HElement& a);

// Interns elements of H up to equality in G.
class ElementTable {
 public:
  explicit ElementTable(const SubgroupContext& ctx) : ctx_(&ctx) {}
  // Index of e, inserting it when new.
  int intern(const HElement& e);
  int find(const HElement& e) const;  // -1 when absent
  const HElement& at(int i) const { return items_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(items_.size()); }
  const std::vector<HElement>& items() const { return items_; }

 private:
  const SubgroupContext* ctx_;
  std::vector<HElement> items_;
  std::map<std::vector<std::int64_t>, std::vector<int>> buckets_;
  std::map<Word, int> free_index_;
  std::vector<std::int64_t> key(const HElement& e) const;
};

struct DigraphEdge {
  int from = 0;
  int to = 0;
  int label = 0;  // index into AdjacencyDigraph::labels
  auto operator<=>(const DigraphEdge&) const = default;
};

struct AdjacencyDigraph {
  int vertex_count = 0;
  std::vector<char> marked;
  std::vector<HElement> labels;   // S_F
  std::vector<int> label_inverse;
  std::vector<DigraphEdge> edges;  // sorted
  std::vector<std::vector<int>> out;  // edge indices leaving each vertex

  void index_edges();
};

// Full: an edge (c, c', s) for every pair x in c, y in c' with x = s y.
// Reduced: within each right coset class of F only the pairs joining a
// member to the least member; every full edge is then the label of a path of
// at most two reduced edges, so components and path languages agree.
enum class DigraphMode { Full, Reduced };

// Nontrivial h in H with hF ∩ F nonempty.
std::vector<HElement> adjacency_set(const FiniteCover& F, const SubgroupView& v);
// Throws Precondition when the symmetry or intersection audit fails, and
// CombinatorialBlowup when a full build needs more than pair_budget pairs.
AdjacencyDigraph build_digraph(const FiniteCover& F, const SubgroupView& v, DigraphMode mode = DigraphMode::Full,
                               std::int64_t pair_budget = 4'000'000);
// Component id per vertex, ignoring orientation; ids follow the least vertex.
std::vector<int> digraph_components(const AdjacencyDigraph& d);
int digraph_component_count(const AdjacencyDigraph& d);

struct LanguageSummary {
  int v0 = 0;
  int v1 = 0;
  std::vector<HElement> K_gens;
  std::vector<HElement> T_reps;
  bool lollipop = true;       // false: spanning-tree Schreier generators
  std::int64_t steps = 0;
};

// Simple paths from v0 to v1 and lollipop loops p l p^-1 at v0.  Throws
// CombinatorialBlowup when more than budget path extensions are needed.
LanguageSummary language_summary(const AdjacencyDigraph& d, const SubgroupContext& ctx, int v0, int v1,
                                 std::int64_t budget);
// The same subgroup and coset data from a spanning tree of the component of
// v0: generators p_u s p_w^-1 per edge, and the tree path to v1.
LanguageSummary schreier_summary(const AdjacencyDigraph& d, const SubgroupContext& ctx, int v0, int v1);

std::string export_dot(const AdjacencyDigraph& d, const GroupPresentation& p);

}  // namespace hyp
