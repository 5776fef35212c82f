#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance binary.  None of them use the subgroup view's heights or the
// cover machinery except where a signature says so.

#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "fixtures.hpp"
#include "hyp/annulus.hpp"
#include "hyp/cayley.hpp"
#include "hyp/digraph.hpp"
#include "hyp/folding.hpp"
#include "hyp/subgroup.hpp"

namespace oracle {

using namespace hyp;

inline void expect(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("oracle precondition failed: " + what);
}

struct Instance {
  std::shared_ptr<const GroupPresentation> p;
  std::shared_ptr<const SubgroupContext> ctx;
  CayleyBall ball;
  std::unique_ptr<SubgroupView> view;
};

inline Instance instance(std::shared_ptr<const GroupPresentation> p, const std::vector<std::string>& gens, int radius,
                         int Q = 0, const std::string& lambda = "1", const std::string& eps = "0") {
  Instance in;
  in.p = p;
  in.ctx = fx::subgroup(p, gens, Q, lambda, eps);
  in.ball = build_ball(p, radius, 40'000'000);
  in.view = std::make_unique<SubgroupView>(in.ctx, in.ball);
  return in;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x)
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

// Each generator together with its inverse.
inline std::vector<Word> sym_words(const GroupPresentation& p, const std::vector<std::string>& ss) {
  std::vector<Word> out;
  for (const auto& s : ss) {
    Word x = p.alphabet().parse(s);
    out.push_back(x);
    out.push_back(inverse(x));
  }
  return out;
}

// Ends of the coset graph seen through the ball: ball vertices are merged
// under left multiplication by the (symmetrised) generators in H, a class has
// height equal to its least layer, and the count for m is the number of
// components of {height > m} that reach height `far`.
inline std::vector<int> coset_graph_counts(const CayleyBall& b, const std::vector<Word>& H, const std::vector<int>& ms,
                                           int far) {
  const std::size_t n = static_cast<std::size_t>(b.size());
  UnionFind uf(n);
  for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) {
    const Word rx = b.rep(x);
    for (const auto& h : H) {
      Vertex t = b.locate(concat(h, rx));
      if (t != kNone) uf.unite(x, t);
    }
  }
  std::vector<int> height(n, 1 << 30);
  for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) {
    int c = uf.find(x);
    height[static_cast<std::size_t>(c)] = std::min(height[static_cast<std::size_t>(c)], b.layer(x));
  }
  std::vector<int> out;
  for (int m : ms) {
    UnionFind side(n);
    for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) {
      int cx = uf.find(x);
      if (height[static_cast<std::size_t>(cx)] <= m) continue;
      for (int s = 0; s < b.degree(); ++s) {
        Vertex y = b.neighbor(x, static_cast<Letter>(s));
        if (y == kNone) continue;
        int cy = uf.find(y);
        if (height[static_cast<std::size_t>(cy)] <= m) continue;
        side.unite(cx, cy);
      }
    }
    std::set<int> reaching;
    for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) {
      int cx = uf.find(x);
      if (cx != x || height[static_cast<std::size_t>(cx)] < far) continue;
      reaching.insert(side.find(cx));
    }
    out.push_back(static_cast<int>(reaching.size()));
  }
  return out;
}

// Every reduced word of length at most n over `rank` generators.
inline std::vector<Word> reduced_words(int rank, int n) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == n) continue;
    for (int x = 0; x < 2 * rank; ++x) {
      if (!out[i].empty() && out[i].back() == inv(static_cast<Letter>(x))) continue;
      Word w = out[i];
      w.push_back(static_cast<Letter>(x));
      out.push_back(w);
    }
  }
  return out;
}

// Components of HF restricted to translates by H-elements of Y-length at
// most n, computed by merging pieces (h, v) that share a vertex of the ball.
// Requires H free on Y so that reduced Y-words are distinct elements.
struct PieceGraph {
  std::vector<YWord> hs;
  std::map<YWord, int> index;
  int comps = 0;
  UnionFind uf{0};
  int id(const YWord& h, int v) const { return index.at(h) * comps + v; }
  bool joined(const YWord& h1, int v1, const YWord& h2, int v2) { return uf.find(id(h1, v1)) == uf.find(id(h2, v2)); }
};

inline PieceGraph piece_graph(const Instance& in, const FiniteCover& F, int n) {
  PieceGraph g;
  g.hs = reduced_words(in.ctx->rank(), n);
  for (std::size_t i = 0; i < g.hs.size(); ++i) g.index[g.hs[i]] = static_cast<int>(i);
  g.comps = static_cast<int>(F.components.size());
  g.uf = UnionFind(g.hs.size() * static_cast<std::size_t>(g.comps));
  // Pieces (h1, v1) and (h2, v2) meet iff h2^-1 h1 = y x^-1 for x in v1, y in v2.
  std::map<std::pair<int, int>, std::set<YWord>> meet;
  const int L = in.view->exact_radius();
  for (std::size_t i = 0; i < F.vertices.size(); ++i) {
    for (std::size_t j = 0; j < F.vertices.size(); ++j) {
      Vertex t = in.ball.locate(concat(in.ball.rep(F.vertices[j]), inverse(in.ball.rep(F.vertices[i]))));
      expect(t != kNone && in.ball.layer(t) <= L, "piece meeting outside the certified radius");
      if (!in.view->member_vertex(t)) continue;
      meet[{F.comp[i], F.comp[j]}].insert(free_reduce(in.view->witness_vertex(t)));
    }
  }
  for (const auto& h1 : g.hs) {
    for (const auto& [vv, ds] : meet) {
      for (const auto& d : ds) {
        YWord h2 = free_reduce(concat(h1, inverse(d)));
        if (!g.index.count(h2)) continue;
        g.uf.unite(g.id(h1, vv.first), g.id(h2, vv.second));
      }
    }
  }
  return g;
}

// h lies in the coset decomposition  ∪ K t  of a language summary.
inline bool language_contains(const LanguageSummary& s, int rank, const YWord& h) {
  std::vector<Word> k;
  for (const auto& e : s.K_gens) k.push_back(e.y);
  FoldedGraph fg = fold(rank, k);
  for (const auto& t : s.T_reps)
    if (folded_member(fg, free_reduce(concat(h, inverse(t.y))))) return true;
  return false;
}

// A random subset of N_{r,R}(H) ∩ B_radius, at most max_size points.
inline FiniteCover random_cover(const Instance& in, const ConstantLedger& g, int radius, double keep,
                                std::mt19937_64& rng, std::size_t max_size) {
  std::bernoulli_distribution coin(keep);
  std::vector<Vertex> vs;
  for (Vertex x = 0; x < in.ball.layer_begin(radius + 1); ++x) {
    int h = in.view->height(x);
    if (h >= g.r && h <= g.R && coin(rng)) vs.push_back(x);
    if (vs.size() >= max_size) break;
  }
  return make_cover(*in.view, g, vs, {0}, 0);
}

inline std::vector<std::int64_t> abelian(const Word& w, int rank) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(rank), 0);
  for (Letter x : w) v[static_cast<std::size_t>(x >> 1)] += (x & 1) ? -1 : 1;
  return v;
}

inline Word power(const Word& h, std::int64_t k) {
  Word out;
  const Word step = k < 0 ? inverse(h) : h;
  for (std::int64_t i = 0; i < std::abs(k); ++i) out.insert(out.end(), step.begin(), step.end());
  return out;
}

// d(z, <h>) in a group with free abelianisation in which h has nonzero image:
// the least layer of a ball vertex y with z y^-1 = h^k.  k is read off the
// abelianisation and the equation is checked by the word problem.  Returns -1
// when no such y lies in the ball.
inline int brute_height(const GroupPresentation& p, const CayleyBall& b, const Word& h, const Word& z) {
  const int n = p.rank();
  const auto eh = abelian(h, n);
  const auto ez = abelian(z, n);
  for (Vertex y = 0; y < static_cast<Vertex>(b.size()); ++y) {
    const Word ry = b.rep(y);
    const auto ey = abelian(ry, n);
    std::optional<std::int64_t> k;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const std::int64_t diff = ez[static_cast<std::size_t>(i)] - ey[static_cast<std::size_t>(i)];
      const std::int64_t e = eh[static_cast<std::size_t>(i)];
      if (e == 0) {
        ok = diff == 0;
      } else if (diff % e != 0) {
        ok = false;
      } else if (!k) {
        k = diff / e;
      } else {
        ok = *k == diff / e;
      }
    }
    if (!ok || !k) continue;
    if (p.is_identity(concat(concat(z, inverse(ry)), power(h, -*k)))) return b.layer(y);
  }
  return -1;
}

// Shortest path from x to y through ball vertices of layer >= R0, by plain
// BFS, or -1 when none of length <= n_max exists inside the ball.
inline int outside_path(const CayleyBall& b, Vertex x, Vertex y, int R0, int n_max) {
  std::vector<int> d(static_cast<std::size_t>(b.size()), -1);
  std::vector<Vertex> q{x};
  d[static_cast<std::size_t>(x)] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    Vertex u = q[h];
    if (u == y) return d[static_cast<std::size_t>(u)];
    if (d[static_cast<std::size_t>(u)] == n_max) continue;
    for (int s = 0; s < b.degree(); ++s) {
      Vertex v = b.neighbor(u, static_cast<Letter>(s));
      if (v < 0 || d[static_cast<std::size_t>(v)] >= 0 || b.layer(v) < R0) continue;
      d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
      q.push_back(v);
    }
  }
  return -1;
}

// Free-group elements reachable by products of the generators whose partial
// products stay within free length max_len.
inline std::unordered_set<std::string> product_closure(const std::vector<Word>& gens, std::size_t max_len) {
  std::unordered_set<std::string> closure{std::string()};
  std::vector<Word> queue{Word{}};
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& g : gens)
      for (const Word& s : {g, inverse(g)}) {
        Word n = free_reduce(concat(queue[h], s));
        if (n.size() <= max_len && closure.insert(std::string(n.begin(), n.end())).second) queue.push_back(n);
      }
  return closure;
}

inline Word random_reduced_word(std::mt19937_64& rng, int rank, int max_len) {
  Word w;
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
  while (static_cast<int>(w.size()) < n) {
    Letter x = static_cast<Letter>(rng() % static_cast<unsigned>(2 * rank));
    if (!w.empty() && w.back() == inv(x)) continue;
    w.push_back(x);
  }
  return w;
}

}  // namespace oracle
