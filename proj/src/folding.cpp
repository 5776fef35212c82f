#include "hyp/folding.hpp"

#include <numeric>

namespace hyp {

namespace {

// Edges carry generator words: for vertex words phi(u) with phi(root) = 1,
// every edge (u, x, v, y) satisfies eval(y) = phi(u) x phi(v)^-1.  Merging
// vertices records the word eval(pot(v)) = phi(find(v)) phi(v)^-1.
struct Folder {
  int alpha;
  struct Edge {
    int u;
    Letter x;
    int v;
    Word y;
  };
  std::vector<Edge> edges;
  std::vector<int> parent;
  std::vector<Word> pot;  // relative to parent

  int add_vertex() {
    parent.push_back(static_cast<int>(parent.size()));
    pot.emplace_back();
    return static_cast<int>(parent.size()) - 1;
  }
  int find(int v) {
    std::size_t i = static_cast<std::size_t>(v);
    int p = parent[i];
    if (p == v) return v;
    int r = find(p);
    if (parent[static_cast<std::size_t>(p)] != p || r != p) {
      pot[i] = free_reduce(concat(pot[static_cast<std::size_t>(p)], pot[i]));
      parent[i] = r;
    }
    return r;
  }
  // Word of the edge relative to the representatives of its endpoints.
  Word relative(const Edge& e) {
    find(e.u);
    find(e.v);
    return free_reduce(concat(concat(pot[static_cast<std::size_t>(e.u)], e.y), inverse(pot[static_cast<std::size_t>(e.v)])));
  }
  void add_edge(int u, Letter x, int v, const Word& y) {
    edges.push_back({u, x, v, y});
    edges.push_back({v, inv(x), u, inverse(y)});
  }
};

}  // namespace

FoldedGraph fold(int rank, const std::vector<Word>& generators) {
  Folder f{2 * rank, {}, {}, {}};
  f.add_vertex();
  for (std::size_t k = 0; k < generators.size(); ++k) {
    Word g = free_reduce(generators[k]);
    if (g.empty()) continue;
    int cur = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const bool last = i + 1 == g.size();
      int next = last ? 0 : f.add_vertex();
      f.add_edge(cur, g[i], next, last ? Word{static_cast<Letter>(2 * k)} : Word{});
      cur = next;
    }
  }
  // Merge targets of equally labelled edges leaving the same class until
  // every class has at most one edge per label.
  std::vector<int> table;
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t n = f.parent.size();
    table.assign(n * static_cast<std::size_t>(f.alpha), -1);
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
      const auto& e = f.edges[i];
      int cu = f.find(e.u), cv = f.find(e.v);
      int& slot = table[static_cast<std::size_t>(cu) * static_cast<std::size_t>(f.alpha) + e.x];
      if (slot < 0) {
        slot = static_cast<int>(i);
        continue;
      }
      const auto& o = f.edges[static_cast<std::size_t>(slot)];
      int a = f.find(o.v), b = cv;
      if (a == b) continue;
      Word la = f.relative(o), lb = f.relative(e);
      if (a < b) {
        f.parent[static_cast<std::size_t>(b)] = a;
        f.pot[static_cast<std::size_t>(b)] = free_reduce(concat(inverse(la), lb));
      } else {
        f.parent[static_cast<std::size_t>(a)] = b;
        f.pot[static_cast<std::size_t>(a)] = free_reduce(concat(inverse(lb), la));
      }
      changed = true;
    }
  }
  // Compact the surviving classes, root first, in order of first index.
  const std::size_t n = f.parent.size();
  std::vector<int> id(n, -1);
  int count = 0;
  for (std::size_t u = 0; u < n; ++u) {
    int c = f.find(static_cast<int>(u));
    if (id[static_cast<std::size_t>(c)] < 0) id[static_cast<std::size_t>(c)] = count++;
  }
  FoldedGraph out;
  out.rank_ = rank;
  const std::size_t slots = static_cast<std::size_t>(count) * static_cast<std::size_t>(2 * rank);
  out.out_.assign(slots, -1);
  out.label_.assign(slots, Word{});
  for (const auto& e : f.edges) {
    const std::size_t at = static_cast<std::size_t>(id[static_cast<std::size_t>(f.find(e.u))]) *
                               static_cast<std::size_t>(2 * rank) + e.x;
    if (out.out_[at] >= 0) continue;
    out.out_[at] = id[static_cast<std::size_t>(f.find(e.v))];
    out.label_[at] = f.relative(e);
  }
  out.folded_ = true;
  return out;
}

std::int64_t FoldedGraph::edge_count() const {
  std::int64_t directed = 0;
  for (int t : out_) directed += (t >= 0);
  return directed / 2;
}

bool folded_member(const FoldedGraph& g, const Word& w) {
  int v = g.root();
  for (Letter x : free_reduce(w)) {
    if (x >= 2 * g.rank()) return false;
    v = g.target(v, x);
    if (v < 0) return false;
  }
  return v == g.root();
}

std::optional<Word> folded_witness(const FoldedGraph& g, const Word& w) {
  int v = g.root();
  Word y;
  for (Letter x : free_reduce(w)) {
    if (x >= 2 * g.rank()) return std::nullopt;
    int t = g.target(v, x);
    if (t < 0) return std::nullopt;
    const Word& l = g.label(v, x);
    y.insert(y.end(), l.begin(), l.end());
    v = t;
  }
  if (v != g.root()) return std::nullopt;
  return free_reduce(y);
}

}  // namespace hyp
