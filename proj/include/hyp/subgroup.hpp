#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hyp/cayley.hpp"
#include "hyp/folding.hpp"
#include "hyp/rational.hpp"

namespace hyp {

// Words over the subgroup alphabet Y use the same letter encoding as G:
// letter 2i is the i-th generator, 2i+1 its inverse.
using YWord = Word;

// Quasiconvex subgroup H = <Y> of G with user-supplied constants.
class SubgroupContext {
 public:
  SubgroupContext(std::shared_ptr<const GroupPresentation> p, std::vector<Word> generators,
                  int Q, Rational lambda, Rational epsilon,
                  std::int64_t enumeration_budget = 4'000'000);

  const GroupPresentation& presentation() const { return *pres_; }
  std::shared_ptr<const GroupPresentation> presentation_ptr() const { return pres_; }
  const std::vector<Word>& generators() const { return gens_; }
  int rank() const { return static_cast<int>(gens_.size()); }
  int Q() const { return Q_; }
  const Rational& lambda() const { return lambda_; }
  const Rational& epsilon() const { return epsilon_; }
  int l() const { return l_; }
  std::int64_t enumeration_budget() const { return budget_; }

  // G-word of a Y-word, freely reduced.
  Word evaluate(const YWord& y) const;
  // ceil(lambda*L + lambda*epsilon): Y-length bound for elements of G-length L.
  int enumeration_length(int L) const;
  // Largest layer touched while tracing Y-words of length enumeration_length(L)
  // whose endpoint lies in B_L.
  int required_radius(int L) const;
  // Largest L with required_radius(L) <= N, or -1.
  int exact_radius(int N) const;

  // Word-level membership, independent of any ball.  Exact: Stallings folding
  // when G is free, otherwise enumeration of H-elements of bounded Y-length
  // followed by the word problem.  Throws BudgetExhausted.
  bool contains(const Word& w) const;
  // A Y-word evaluating to w, when w lies in H.
  std::optional<YWord> witness(const Word& w) const;

  // Integer functionals on exponent sums that vanish on relators and on
  // every generator of H; equal values are necessary for Hx = Hy.
  std::vector<std::int64_t> coset_invariant(const Word& w) const;
  // Functionals vanishing on relators only; equal values are necessary for
  // two words to represent the same element.
  std::vector<std::int64_t> element_invariant(const Word& w) const;

  // H is free on Y, so freely reduced Y-words are normal forms and folding
  // over Y decides membership in subgroups of H.  Certified when G is free
  // (folding over G has rank |Y|) or when |Y| = 1, the generator is
  // nontrivial, and no relator is a proper power (G torsion-free).
  bool y_free() const { return y_free_; }
  const std::optional<FoldedGraph>& folded() const { return folded_; }
  // d(w, H) read from the folded graph when G is free: core distance to the
  // last vertex reached plus the unread suffix.
  std::optional<int> free_distance(const Word& w) const;

 private:
  struct Element {
    YWord y;
    Word g;
  };
  const std::vector<Element>& elements_up_to(int m) const;
  bool compute_y_free() const;
  std::vector<std::int64_t> apply_functionals(const std::vector<std::vector<std::int64_t>>& fs,
                                              const Word& w) const;

  std::shared_ptr<const GroupPresentation> pres_;
  std::vector<Word> gens_;
  int Q_;
  Rational lambda_, epsilon_;
  int l_ = 0;
  std::int64_t budget_;
  std::optional<FoldedGraph> folded_;
  std::vector<int> core_dist_;
  std::vector<int> enum_len_;
  std::vector<std::vector<std::int64_t>> functionals_;
  std::vector<std::vector<std::int64_t>> group_functionals_;
  bool y_free_ = false;

  mutable std::mutex mu_;
  mutable std::vector<Element> elems_;
  mutable std::map<std::vector<std::int64_t>, std::vector<std::size_t>> by_invariant_;
  mutable std::vector<std::size_t> level_end_;  // elems_ with Y-length <= k end at level_end_[k]
};

// A subgroup context bound to one ball: the exact set H ∩ B_L for the
// largest certified L, membership witnesses, and distances to H.
class SubgroupView {
 public:
  SubgroupView(std::shared_ptr<const SubgroupContext> ctx, const CayleyBall& b);

  const SubgroupContext& context() const { return *ctx_; }
  const CayleyBall& ball() const { return b_; }
  int exact_radius() const { return L_; }

  // H ∩ B_L in vertex order; L <= exact_radius().
  std::vector<Vertex> subgroup_ball(int L) const;
  bool member_vertex(Vertex v) const;  // layer(v) <= exact_radius()
  YWord witness_vertex(Vertex v) const;
  bool is_member(const Word& w) const;

  // Exact d(x,H).  Throws InsufficientRadius when no certificate applies.
  int height(Vertex x) const;
  // d(x,H) when certified by the in-ball search alone.
  std::optional<int> certified_height(Vertex x) const;
  // Length of a real path from x to H inside the ball (an upper bound), -1 if none.
  int height_upper(Vertex x) const { return upper_[static_cast<std::size_t>(x)]; }
  // Exact d(x, gH) = d(g^-1 x, H).
  int distance_to_coset(Vertex g, Vertex x) const;
  // Hx = Hy (right cosets), decided at word level.
  bool same_coset(Vertex x, Vertex y) const;
  // Y-word for x y^-1 when Hx = Hy.
  std::optional<YWord> coset_witness(Vertex x, Vertex y) const;

  std::int64_t fallback_searches() const { return fallbacks_.load(); }

 private:
  int coset_search(Vertex x, int upper) const;

  std::shared_ptr<const SubgroupContext> ctx_;
  const CayleyBall& b_;
  int L_ = -1;
  std::vector<Vertex> elements_;
  std::unordered_map<Vertex, YWord> witness_;
  std::vector<int> upper_;
  mutable std::vector<std::atomic<int>> height_cache_;
  mutable std::atomic<std::int64_t> fallbacks_{0};
  mutable std::once_flag buckets_once_;
  mutable std::map<std::vector<std::int64_t>, std::vector<Vertex>> buckets_;
  void build_buckets() const;
};

// Free-function forms of the view queries.
std::vector<Vertex> subgroup_ball(const SubgroupView& v, int L);
bool is_member(const SubgroupView& v, const Word& w);
int distance_to_subgroup(const SubgroupView& v, Vertex x);
int distance_to_coset(const SubgroupView& v, Vertex g, Vertex x);

}  // namespace hyp
