#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyp/annulus.hpp"
#include "hyp/constants.hpp"
#include "hyp/digraph.hpp"
#include "hyp/subgroup.hpp"

namespace hyp {

enum class Tri { Yes, No, Unknown };
const char* tri_name(Tri t);

// Decides membership of an H-element in a subgroup of H, all given as Y-words.
class GwpOracle {
 public:
  virtual ~GwpOracle() = default;
  virtual std::string name() const = 0;
  virtual bool exact() const = 0;
  virtual Tri member(const YWord& h, const std::vector<YWord>& gens) = 0;
  std::int64_t calls() const { return calls_; }

 protected:
  std::int64_t calls_ = 0;
};

// Stallings folding over Y; requires H free on Y.  Never answers Unknown.
class FoldingOracle : public GwpOracle {
 public:
  explicit FoldingOracle(const SubgroupContext& ctx);
  std::string name() const override { return "folding"; }
  bool exact() const override { return true; }
  Tri member(const YWord& h, const std::vector<YWord>& gens) override;
  // [H : <gens>] when finite.
  std::optional<std::int64_t> index(const std::vector<YWord>& gens) const;

 private:
  int rank_;
};

// Breadth-first search over products of the generators, comparing in G with
// the word problem.  Answers Yes or Unknown.
class BoundedSearchOracle : public GwpOracle {
 public:
  BoundedSearchOracle(const SubgroupContext& ctx, std::int64_t budget);
  std::string name() const override { return "bounded-search"; }
  bool exact() const override { return false; }
  Tri member(const YWord& h, const std::vector<YWord>& gens) override;

 private:
  const SubgroupContext* ctx_;
  std::int64_t budget_;
};

std::unique_ptr<GwpOracle> default_oracle(const SubgroupContext& ctx, std::int64_t budget);

// The H-orbits of components of A_{r,R,K}(H), read off the reduced digraph of
// the minimal cover.  Piece (h, v) is the translate h·v of cover component v;
// it lies in the component labelled (D, h p_v^-1 K_D) where D is the digraph
// component of v, p_v the tree path label from the base of D to v, and K_D
// the loop subgroup at the base.
struct ComponentModel {
  FiniteCover cover;
  AdjacencyDigraph digraph;
  std::vector<int> dcomp;                 // digraph component per vertex
  std::vector<int> orbits;                // digraph components meeting C_K
  std::vector<int> base;                  // per digraph component
  std::vector<std::vector<YWord>> K;      // loop subgroup generators per digraph component
  std::vector<YWord> tree_path;           // per vertex, from the base of its component
};

ComponentModel component_model(const SubgroupView& v, const ConstantLedger& g);

struct FilteredResult {
  enum class Kind { Finite, AtLeast, BudgetExhausted } kind = Kind::BudgetExhausted;
  // Certified number of pairwise distinct components found.  AtLeast means
  // some comparisons stayed undecided by an inexact oracle.
  int n = 0;
  std::vector<int> sequence;  // N_0, N_1, ...
  std::string oracle;
  std::int64_t oracle_calls = 0;
};
const char* filtered_kind_name(FilteredResult::Kind k);

struct FilteredBudget {
  int max_generations = 12;
  std::int64_t max_pieces = 200'000;
};

// Growing-cover semi-decision of the filtered ends count.
FilteredResult filtered_ends(const SubgroupView& v, const ConstantLedger& g, GwpOracle& oracle,
                             const FilteredBudget& budget = {});
// Yes once N_i >= N, No when the sequence stabilises below N with an exact
// oracle, Unknown otherwise.
Tri filtered_ends_at_least(const SubgroupView& v, const ConstantLedger& g, int N, GwpOracle& oracle,
                           const FilteredBudget& budget = {});

bool is_finite_index(const SubgroupView& v, const ConstantLedger& g);

struct ComponentAction {
  int n = 0;
  std::vector<std::vector<int>> perms;  // perms[y][c] = image of component c under generator y
  std::vector<YWord> kernel_generators; // Schreier generators of the kernel H'
  std::int64_t kernel_index = 1;        // [H : H'], the order of the image group
  std::vector<std::pair<int, YWord>> components;  // (digraph component, coset representative)
};

// Requires the filtered count to be finite; throws Precondition otherwise.
ComponentAction component_action(const SubgroupView& v, const ConstantLedger& g, GwpOracle& oracle,
                                 const FilteredBudget& budget = {});

struct LadderRung {
  int r = 0, K = 0, R = 0;
  int e_pair = 0;
  int cover_size = 0;
  int cover_components = 0;
  int marked_components = 0;
  int digraph_components = 0;
};

struct EndsOptions {
  std::vector<std::array<int, 3>> ladder;  // empty: (r,K,R) then (r+1,K+1,R+1)
  bool filtered = true;
  FilteredBudget filtered_budget;
  std::int64_t oracle_budget = 200'000;
  std::int64_t upper_bound_vertex_budget = 20'000'000;
};

struct EndsReport {
  std::optional<int> e_pair;     // set only when two consecutive rungs agree
  bool stabilized = false;
  bool finite_index = false;
  std::int64_t upper_bound = -1; // |B_{2l+R}(1)|, -1 when beyond the vertex budget
  std::vector<LadderRung> stabilization;
  std::optional<FilteredResult> filtered;
  ConstantLedger constants;
  std::int64_t budget_spent = 0;
  std::vector<std::string> notes;
};

EndsReport ends_of_pair(const SubgroupView& v, const ConstantLedger& g, const EndsOptions& opt = {});

// The ledger with (r, K, R) replaced, re-validated in desk mode.
ConstantLedger with_triple(const ConstantLedger& g, int r, int K, int R);

}  // namespace hyp
