#include <chrono>
#include <map>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "hyp/cayley.hpp"

using namespace hyp;

namespace {

// Exponent sums modulo the exponent vector of the single relator.
std::vector<int> coset_invariant(const GroupPresentation& p, const Word& w) {
  std::vector<int> e(static_cast<std::size_t>(p.rank()), 0), r(e.size(), 0);
  for (Letter x : w) e[x >> 1] += (x & 1) ? -1 : 1;
  for (Letter x : p.relators().at(0)) r[x >> 1] += (x & 1) ? -1 : 1;
  if (r[0] == 0) return e;
  std::vector<int> out;
  for (std::size_t i = 1; i < e.size(); ++i) out.push_back(e[i] * r[0] - e[0] * r[i]);
  out.push_back(((e[0] % r[0]) + r[0]) % r[0]);
  return out;
}

// Independent element count: all reduced words up to length L, grouped into
// group elements by pairwise Dehn equality inside abelianization buckets.
std::vector<std::int64_t> brute_sphere_sizes(const GroupPresentation& p, int L) {
  const int A = p.alphabet().size();
  std::vector<std::vector<Word>> by_len(static_cast<std::size_t>(L) + 1);
  by_len[0].push_back({});
  for (int len = 1; len <= L; ++len)
    for (const auto& u : by_len[static_cast<std::size_t>(len) - 1])
      for (int x = 0; x < A; ++x)
        if (u.empty() || u.back() != inv(static_cast<Letter>(x))) {
          Word v = u;
          v.push_back(static_cast<Letter>(x));
          by_len[static_cast<std::size_t>(len)].push_back(v);
        }
  std::map<std::vector<int>, std::vector<Word>> reps;
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(L) + 1, 0);
  for (int len = 0; len <= L; ++len) {
    for (const auto& w : by_len[static_cast<std::size_t>(len)]) {
      auto& bucket = reps[coset_invariant(p, w)];
      bool found = false;
      for (const auto& r : bucket)
        if (p.equal(r, w)) {
          found = true;
          break;
        }
      if (!found) {
        bucket.push_back(w);
        ++sizes[static_cast<std::size_t>(len)];
      }
    }
  }
  return sizes;
}

}  // namespace

TEST_CASE("free group ball sizes") {
  auto f = fx::free2();
  for (int R = 0; R <= 10; ++R) {
    auto b = build_ball(f, R, 10000000);
    std::int64_t expect = 1;
    std::int64_t p3 = 1;
    for (int i = 0; i < R; ++i) p3 *= 3;
    expect = 1 + 4 * (p3 - 1) / 2;
    CHECK(b.size() == expect);
    CHECK(b.complete());
  }
}

TEST_CASE("surface ball examples") {
  auto s = fx::surface2();
  auto b3 = build_ball(s, 3, 1000000);
  CHECK(b3.size() == 457);
  auto b4 = build_ball(s, 4, 1000000);
  CHECK(b4.size() < 1 + 8 + 56 + 392 + 2744);
  CHECK(b4.complete());
}

TEST_CASE("layer counts agree with brute-force Dehn identification") {
  for (auto p : {fx::surface2(), fx::nonorientable4()}) {
    auto b = build_ball(p, 5, 1000000);
    auto sizes = brute_sphere_sizes(*p, 5);
    for (int j = 0; j <= 5; ++j) CHECK(b.sphere_size(j) == sizes[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("representatives are distinct and edges are relations") {
  auto p = fx::surface2();
  auto b = build_ball(p, 4, 1000000);
  // every pair of representatives with equal abelianization is distinct
  std::map<std::vector<int>, std::vector<Vertex>> buckets;
  for (Vertex v = 0; v < b.size(); ++v) {
    Word w = b.rep(v);
    CHECK(static_cast<int>(w.size()) == b.layer(v));
    std::vector<int> ab(4, 0);
    for (Letter x : w) ab[x >> 1] += (x & 1) ? -1 : 1;
    buckets[ab].push_back(v);
  }
  std::int64_t pairs = 0;
  for (const auto& [k, vs] : buckets)
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        ++pairs;
        if (p->equal(b.rep(vs[i]), b.rep(vs[j]))) FAIL("equal representatives");
      }
  CHECK(pairs > 0);
  for (Vertex u = 0; u < b.size(); ++u)
    for (int s = 0; s < b.degree(); ++s) {
      Vertex v = b.neighbor(u, static_cast<Letter>(s));
      if (u < b.layer_begin(4)) CHECK(v >= 0);
      if (v < 0) continue;
      CHECK(b.neighbor(v, inv(static_cast<Letter>(s))) == u);
      Word rel = concat(b.rep(u), Word{static_cast<Letter>(s)});
      CHECK(p->equal(rel, b.rep(v)));
    }
}

TEST_CASE("sampled invariants on a radius-7 ball") {
  auto p = fx::surface2();
  auto b = build_ball(p, 7, 5000000);
  REQUIRE(b.complete());
  std::mt19937_64 rng(5);
  BallSearch bs(b);
  bs.run({0}, b.radius());
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(b.size() - 1));
  for (int t = 0; t < 1000; ++t) {
    Vertex v = pick(rng);
    CHECK(bs.dist(v) == b.layer(v));
  }
  // closed walks: random walk, then back along the representative
  for (int t = 0; t < 300; ++t) {
    Vertex v = 0;
    Word walk;
    for (int i = 0; i < 12; ++i) {
      Letter s = static_cast<Letter>(rng() % 8);
      Vertex n = b.neighbor(v, s);
      if (n < 0) continue;
      walk.push_back(s);
      v = n;
    }
    CHECK(p->is_identity(concat(walk, inverse(b.rep(v)))));
  }
  // sampled distinctness in the outer layers
  for (int t = 0; t < 2000; ++t) {
    Vertex x = pick(rng), y = pick(rng);
    if (x == y) continue;
    CHECK_FALSE(p->equal(b.rep(x), b.rep(y)));
  }
}

TEST_CASE("build_ball is deterministic and budgeted") {
  auto p = fx::surface2();
  auto a = build_ball(p, 5, 1000000);
  auto c = build_ball(p, 5, 1000000);
  REQUIRE(a.size() == c.size());
  for (Vertex v = 0; v < a.size(); ++v) CHECK(a.rep(v) == c.rep(v));
  auto partial = build_ball(p, 5, 100);
  CHECK_FALSE(partial.complete());
  // shortlex order of representatives
  for (Vertex v = 1; v < a.size(); ++v) CHECK(shortlex_less(a.rep(v - 1), a.rep(v)));
}

TEST_CASE("ball_distance") {
  auto f = build_ball(fx::free2(), 6, 1000000);
  const auto& A = f.presentation().alphabet();
  Vertex a = f.locate(A.parse("a")), bb = f.locate(A.parse("b"));
  CHECK(ball_distance(f, 0, a) == 1);
  CHECK(ball_distance(f, a, bb) == 2);
  CHECK(ball_distance(f, a, a) == 0);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(f.layer_begin(4) - 1));
  for (int t = 0; t < 300; ++t) {
    Vertex x = pick(rng), y = pick(rng);
    Word q = free_reduce(concat(inverse(f.rep(x)), f.rep(y)));
    CHECK(ball_distance(f, x, y) == static_cast<int>(q.size()));
  }
  // uncertified pairs report unknown
  Vertex far1 = f.layer_begin(6), far2 = f.layer_begin(7) - 1;
  CHECK_FALSE(ball_distance(f, far1, far2).has_value());
}

TEST_CASE("estimate_delta") {
  auto f = build_ball(fx::free2(), 6, 1000000);
  CHECK(estimate_delta(f, {3, 0, 1, 1}).delta == 0);
  auto z = build_ball(fx::surface2(), 0, 10);
  CHECK(estimate_delta(z, {}).delta == 0);
  auto s = build_ball(fx::surface2(), 6, 5000000);
  auto e = estimate_delta(s, {2, 0, 1, 1});
  CHECK(e.delta > 0);
  CHECK(e.triangles > 0);
  auto e4 = estimate_delta(s, {2, 0, 1, 4});
  CHECK(e4.delta == e.delta);
  CHECK(e4.triangles == e.triangles);
}

TEST_CASE("double dagger contrast") {
  auto f = build_ball(fx::free2(), 4, 1000000);
  auto vf = check_double_dagger(f, 2, 30, {2, 3, 1});
  REQUIRE(vf.per_radius.size() == 2);
  for (const auto& r : vf.per_radius) CHECK(r.status == DaggerRadius::Status::Failure);
  CHECK(vf.implicit_free);
  CHECK_FALSE(vf.n.has_value());

  auto s = build_ball(fx::surface2(), 7, 5000000);
  auto v1 = check_double_dagger(s, 1, 30, {1, 3, 1});
  REQUIRE(v1.n.has_value());
  CHECK(*v1.n == 0);  // bipartite: no distinct same-layer pairs at distance 1

  auto v30 = check_double_dagger(s, 3, 30, {1, 3, 1});
  REQUIRE(v30.per_radius.size() == 3);
  CHECK(v30.per_radius[0].status == DaggerRadius::Status::Bound);
  CHECK(v30.per_radius[0].n == 24);
  CHECK(v30.per_radius[1].status == DaggerRadius::Status::Inconclusive);
  CHECK(v30.per_radius[2].status == DaggerRadius::Status::Inconclusive);

  auto v40 = check_double_dagger(s, 3, 40, {1, 2, 2});
  REQUIRE(v40.n.has_value());
  CHECK(*v40.n == 36);

  // independent per-pair recomputation
  BallSearch bs(s);
  for (int R0 = 1; R0 <= 2; ++R0) {
    int worst = 0;
    std::int64_t pairs = 0;
    for (Vertex x = s.layer_begin(R0); x < s.layer_begin(R0 + 1); ++x) {
      bs.run({x}, 3);
      for (Vertex y : bs.visited())
        if (y > x && s.layer(y) == R0) {
          ++pairs;
          worst = std::max(worst, oracle::outside_path(s, x, y, R0, 40));
        }
    }
    CHECK(v40.per_radius[static_cast<std::size_t>(R0 - 1)].pairs == pairs);
    CHECK(v40.per_radius[static_cast<std::size_t>(R0 - 1)].n == worst);
  }
}
