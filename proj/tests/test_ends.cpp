#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "hyp/annulus.hpp"
#include "hyp/ends.hpp"
#include "hyp/error.hpp"

using namespace hyp;
using oracle::coset_graph_counts;
using oracle::Instance;
using oracle::instance;
using oracle::sym_words;

namespace {

class Undecided : public GwpOracle {
 public:
  std::string name() const override { return "undecided"; }
  bool exact() const override { return false; }
  Tri member(const YWord&, const std::vector<YWord>&) override {
    ++calls_;
    return Tri::Unknown;
  }
};

// Shared instances so that cached heights are reused across cases.
const Instance& surface_a() {
  static Instance in = instance(fx::surface2(), {"a"}, 6);
  return in;
}
const Instance& n4_a() {
  static Instance in = instance(fx::nonorientable4(), {"a"}, 6);
  return in;
}
const Instance& free_a() {
  static Instance in = instance(fx::free2(), {"a"}, 8);
  return in;
}

}  // namespace

TEST_CASE("coset graph oracle on the shipped pairs") {
  // Two sides of a simple closed curve, one side of a one-sided curve, and
  // the tree whose complement components triple with each level.
  CHECK(coset_graph_counts(surface_a().ball, sym_words(*surface_a().p, {"a"}), {1, 2}, 5) == std::vector<int>{2, 2});
  CHECK(coset_graph_counts(n4_a().ball, sym_words(*n4_a().p, {"a"}), {1, 2}, 5) == std::vector<int>{1, 1});
  CHECK(coset_graph_counts(free_a().ball, sym_words(*free_a().p, {"a"}), {0, 1, 2}, 7) == std::vector<int>{2, 6, 18});
}

TEST_CASE("ends of the surface group relative to a simple closed curve") {
  const Instance& in = surface_a();
  const auto oracle = coset_graph_counts(in.ball, sym_words(*in.p, {"a"}), {1, 2}, 5);
  REQUIRE(oracle[0] == oracle[1]);
  EndsReport r = ends_of_pair(*in.view, fx::desk(1, 1, 4));
  REQUIRE(r.stabilization.size() == 2);
  CHECK(r.stabilization[0].r == 1);
  CHECK(r.stabilization[1].K == 2);
  CHECK(r.stabilization[1].R == 5);
  CHECK(r.stabilized);
  REQUIRE(r.e_pair.has_value());
  CHECK(*r.e_pair == 2);
  CHECK(*r.e_pair == oracle[0]);
  CHECK_FALSE(r.finite_index);
  CHECK(r.upper_bound == in.ball.layer_begin(2 * in.ctx->l() + 4 + 1));
  CHECK(*r.e_pair <= r.upper_bound);
  REQUIRE(r.filtered.has_value());
  CHECK(r.filtered->kind == FilteredResult::Kind::Finite);
  CHECK(r.filtered->n == 2);
  CHECK(r.filtered->n >= *r.e_pair);
  CHECK(r.filtered->oracle == "folding");

  // Below the width at which the annulus wraps around the octagons the
  // counts are artefacts, and the ladder says so.
  EndsOptions thin;
  thin.ladder = {{1, 1, 2}, {2, 2, 4}};
  thin.filtered = false;
  EndsReport t = ends_of_pair(*in.view, fx::desk(1, 1, 2), thin);
  CHECK(t.stabilization[0].e_pair == 6);
  CHECK(t.stabilization[1].e_pair == 36);
  CHECK_FALSE(t.stabilized);
  CHECK_FALSE(t.e_pair.has_value());
}

TEST_CASE("free group relative to a cyclic factor does not stabilise") {
  const Instance& in = free_a();
  const auto oracle = coset_graph_counts(in.ball, sym_words(*in.p, {"a"}), {0, 1, 2}, 7);
  // Each rung counts the complement components above height r - 1.
  for (int r = 1; r <= 3; ++r) {
    EndsOptions one;
    one.ladder = {{r, r, r + 1}};
    one.filtered = false;
    EndsReport rep = ends_of_pair(*in.view, fx::desk(r, r, r + 1), one);
    CHECK(rep.stabilization[0].e_pair == oracle[static_cast<std::size_t>(r - 1)]);
  }
  EndsReport r = ends_of_pair(*in.view, fx::desk(1, 1, 2));
  CHECK(r.stabilization[0].e_pair == 2);
  CHECK(r.stabilization[1].e_pair == 6);
  CHECK_FALSE(r.stabilized);
  CHECK_FALSE(r.e_pair.has_value());
  REQUIRE(r.filtered.has_value());
  CHECK(r.filtered->kind == FilteredResult::Kind::BudgetExhausted);
  // The certified count grows with every generation.
  const auto& s = r.filtered->sequence;
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}

TEST_CASE("whole group has an empty annulus") {
  Instance in = instance(fx::surface2(), {"a", "b", "c", "d"}, 4);
  EndsReport r = ends_of_pair(*in.view, fx::desk(1, 1, 2));
  CHECK(r.finite_index);
  CHECK(r.stabilized);
  CHECK(r.e_pair == 0);
  REQUIRE(r.filtered.has_value());
  CHECK(r.filtered->kind == FilteredResult::Kind::Finite);
  CHECK(r.filtered->n == 0);
  CHECK(is_finite_index(*in.view, fx::desk(1, 1, 2)));
}

TEST_CASE("finite index detection") {
  // {a, baB, bb} generates the words of even b-exponent, index 2 in F2.
  auto p = fx::free2();
  auto ctx = fx::subgroup(p, {"a", "baB", "bb"}, 1, "1", "2");
  CayleyBall b = build_ball(p, 6, 20'000'000);
  SubgroupView v(ctx, b);
  CHECK(is_finite_index(v, fx::desk(2, 2, 3, 1)));
  // Independent check: no coset sits above height 1.
  CHECK(coset_graph_counts(b, sym_words(*p, {"a", "baB", "bb"}), {1}, 2) == std::vector<int>{0});
  CHECK(FoldingOracle(*ctx).index({}) == std::nullopt);

  CHECK_FALSE(is_finite_index(*surface_a().view, fx::desk(1, 1, 4)));
  CHECK_FALSE(is_finite_index(*free_a().view, fx::desk(1, 1, 2)));
}

TEST_CASE("filtered ends at least N") {
  const Instance& in = surface_a();
  FoldingOracle o(*in.ctx);
  const auto g = fx::desk(1, 1, 4);
  CHECK(filtered_ends_at_least(*in.view, g, 0, o) == Tri::Yes);
  CHECK(filtered_ends_at_least(*in.view, g, 1, o) == Tri::Yes);
  CHECK(filtered_ends_at_least(*in.view, g, 2, o) == Tri::Yes);
  CHECK(filtered_ends_at_least(*in.view, g, 3, o) == Tri::No);

  FoldingOracle of(*free_a().ctx);
  CHECK(filtered_ends_at_least(*free_a().view, fx::desk(1, 1, 2), 7, of) == Tri::Yes);

  // A bounded search only certifies sameness.  Here each orbit has a single
  // side, every later piece is matched, and the count is still certified.
  BoundedSearchOracle ob(*in.ctx, 2000);
  CHECK(filtered_ends_at_least(*in.view, g, 2, ob) == Tri::Yes);
  CHECK(filtered_ends_at_least(*in.view, g, 3, ob) == Tri::No);
  FilteredResult fb = filtered_ends(*in.view, g, ob);
  CHECK(fb.kind == FilteredResult::Kind::Finite);
  CHECK(fb.n == 2);
  // Trivial stabilisers are decided by the word problem alone.
  BoundedSearchOracle obf(*free_a().ctx, 2000);
  FilteredResult ff = filtered_ends(*free_a().view, fx::desk(1, 1, 2), obf);
  CHECK(ff.kind == FilteredResult::Kind::BudgetExhausted);
  CHECK(ff.n == 50);
  // An oracle that never decides leaves one certified side per orbit.
  Undecided u;
  FilteredResult fu = filtered_ends(*in.view, g, u);
  CHECK(fu.kind == FilteredResult::Kind::AtLeast);
  CHECK(fu.n == 2);
  CHECK(filtered_ends_at_least(*in.view, g, 2, u) == Tri::Yes);
  CHECK(filtered_ends_at_least(*in.view, g, 3, u) == Tri::Unknown);
}

TEST_CASE("membership oracles") {
  auto p = fx::free2();
  auto ctx = fx::subgroup(p, {"a", "b"});
  FoldingOracle f(*ctx);
  BoundedSearchOracle b(*ctx, 5000);
  const YWord a2{0, 0}, ab{0, 2}, abAB{0, 2, 1, 3};
  const std::vector<YWord> sq{{0, 0}, {2}};
  CHECK(f.member(a2, sq) == Tri::Yes);
  CHECK(f.member(ab, sq) == Tri::No);
  CHECK(b.member(a2, sq) == Tri::Yes);
  CHECK(b.member(ab, sq) == Tri::Unknown);
  CHECK(b.member(abAB, {{0}, {2}}) == Tri::Yes);
  CHECK(b.member(ab, {}) == Tri::No);
  CHECK(b.member({}, {}) == Tri::Yes);
  CHECK(f.index(sq) == std::nullopt);
  CHECK(f.index({{0, 0}, {2}, {0, 2, 1}}) == 2);
  CHECK(f.index({{0}}) == std::nullopt);
  CHECK(f.calls() == 2);

  // Not known to be free on its generators: folding refuses.
  auto s = fx::subgroup(fx::surface2(), {"a", "b", "c", "d"});
  CHECK_THROWS_AS(FoldingOracle{*s}, Error);
  CHECK(default_oracle(*s, 10)->name() == "bounded-search");
  CHECK(default_oracle(*ctx, 10)->name() == "folding");
}

TEST_CASE("component action") {
  SUBCASE("a simple closed curve fixes both sides") {
    FoldingOracle o(*surface_a().ctx);
    ComponentAction a = component_action(*surface_a().view, fx::desk(1, 1, 4), o);
    CHECK(a.n == 2);
    REQUIRE(a.perms.size() == 1);
    CHECK(a.perms[0] == std::vector<int>{0, 1});
    CHECK(a.kernel_index == 1);
    CHECK(a.kernel_generators == std::vector<YWord>{{0}});
  }
  SUBCASE("a one-sided curve swaps the sides") {
    const Instance& in = n4_a();
    const auto g = fx::desk(1, 1, 4);
    FoldingOracle o(*in.ctx);
    ComponentAction a = component_action(*in.view, g, o);
    CHECK(a.n == 2);
    REQUIRE(a.perms.size() == 1);
    CHECK(a.perms[0] == std::vector<int>{1, 0});
    CHECK(a.kernel_index == 2);
    CHECK(a.kernel_generators == std::vector<YWord>{{0, 0}});
    // Orbit-stabiliser audit: the kernel has index equal to the image order,
    // and the orbits of the action are the H-orbits counted by e(G,H).
    CHECK(o.index(a.kernel_generators) == a.kernel_index);
    EndsOptions one;
    one.ladder = {{1, 1, 4}};
    one.filtered = false;
    EndsReport r = ends_of_pair(*in.view, g, one);
    CHECK(r.stabilization[0].e_pair == 1);
    CHECK(coset_graph_counts(in.ball, sym_words(*in.p, {"a"}), {1}, 5) == std::vector<int>{1});
  }
  SUBCASE("infinite filtered count is refused") {
    FoldingOracle o(*free_a().ctx);
    FilteredBudget small;
    small.max_generations = 3;
    CHECK_THROWS_AS(component_action(*free_a().view, fx::desk(1, 1, 2), o, small), Error);
  }
}

TEST_CASE("reports are deterministic") {
  const Instance& in = surface_a();
  EndsReport a = ends_of_pair(*in.view, fx::desk(1, 1, 4));
  EndsReport b = ends_of_pair(*in.view, fx::desk(1, 1, 4));
  REQUIRE(a.stabilization.size() == b.stabilization.size());
  for (std::size_t i = 0; i < a.stabilization.size(); ++i) {
    CHECK(a.stabilization[i].e_pair == b.stabilization[i].e_pair);
    CHECK(a.stabilization[i].cover_size == b.stabilization[i].cover_size);
  }
  CHECK(a.filtered->sequence == b.filtered->sequence);
  CHECK(a.budget_spent == b.budget_spent);
}
