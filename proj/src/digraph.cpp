#include "hyp/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace hyp {

HElement make_element(const SubgroupContext& ctx, const YWord& y) {
  HElement e;
  e.y = free_reduce(y);
  e.g = ctx.evaluate(e.y);
  return e;
}

HElement multiply(const SubgroupContext& ctx, const HElement& a, const HElement& b) {
  return make_element(ctx, concat(a.y, b.y));
}

HElement invert(const SubgroupContext& ctx, const HElement& a) { return make_element(ctx, inverse(a.y)); }

std::vector<std::int64_t> ElementTable::key(const HElement& e) const { return ctx_->element_invariant(e.g); }

int ElementTable::find(const HElement& e) const {
  if (ctx_->y_free()) {
    auto it = free_index_.find(free_reduce(e.y));
    return it == free_index_.end() ? -1 : it->second;
  }
  auto it = buckets_.find(key(e));
  if (it == buckets_.end()) return -1;
  const GroupPresentation& p = ctx_->presentation();
  for (int i : it->second)
    if (p.equal(items_[static_cast<std::size_t>(i)].g, e.g)) return i;
  return -1;
}

int ElementTable::intern(const HElement& e) {
  int i = find(e);
  if (i >= 0) return i;
  i = size();
  items_.push_back(e);
  if (ctx_->y_free())
    free_index_.emplace(free_reduce(e.y), i);
  else
    buckets_[key(e)].push_back(i);
  return i;
}

void AdjacencyDigraph::index_edges() {
  out.assign(static_cast<std::size_t>(vertex_count), {});
  for (std::size_t i = 0; i < edges.size(); ++i) out[static_cast<std::size_t>(edges[i].from)].push_back(static_cast<int>(i));
}

namespace {

struct CosetClass {
  std::vector<int> members;       // indices into F.vertices
  std::vector<YWord> to_first;    // Y-word of x_i x_1^-1
};

std::vector<CosetClass> coset_classes(const FiniteCover& F, const SubgroupView& v) {
  const CayleyBall& b = v.ball();
  const SubgroupContext& ctx = v.context();
  std::map<std::pair<int, std::vector<std::int64_t>>, std::vector<int>> buckets;
  for (std::size_t i = 0; i < F.vertices.size(); ++i)
    buckets[{F.heights[i], ctx.coset_invariant(b.rep(F.vertices[i]))}].push_back(static_cast<int>(i));
  std::vector<CosetClass> out;
  for (auto& [k, idx] : buckets) {
    std::vector<CosetClass> local;
    for (int i : idx) {
      const Vertex x = F.vertices[static_cast<std::size_t>(i)];
      bool placed = false;
      for (auto& c : local) {
        const Vertex y = F.vertices[static_cast<std::size_t>(c.members.front())];
        if (auto w = v.coset_witness(x, y)) {
          c.members.push_back(i);
          c.to_first.push_back(free_reduce(*w));
          placed = true;
          break;
        }
      }
      if (!placed) local.push_back({{i}, {YWord{}}});
    }
    for (auto& c : local)
      if (c.members.size() > 1) out.push_back(std::move(c));
  }
  return out;
}

bool label_less(const HElement& a, const HElement& b) {
  if (a.g != b.g) return shortlex_less(a.g, b.g);
  return shortlex_less(a.y, b.y);
}

}  // namespace

AdjacencyDigraph build_digraph(const FiniteCover& F, const SubgroupView& v, DigraphMode mode,
                               std::int64_t pair_budget) {
  const SubgroupContext& ctx = v.context();
  const GroupPresentation& p = ctx.presentation();
  const CayleyBall& b = v.ball();
  AdjacencyDigraph d;
  d.vertex_count = static_cast<int>(F.components.size());
  d.marked = F.marked;

  ElementTable table(ctx);
  struct Raw {
    int from, to, label;
    Vertex x, y;
  };
  std::vector<Raw> raw;
  const auto classes = coset_classes(F, v);
  if (mode == DigraphMode::Full) {
    std::int64_t pairs = 0;
    for (const auto& c : classes) pairs += static_cast<std::int64_t>(c.members.size()) * static_cast<std::int64_t>(c.members.size() - 1);
    if (pairs > pair_budget)
      fail(ErrorKind::CombinatorialBlowup, "full adjacency digraph needs " + std::to_string(pairs) + " coset pairs");
  }
  for (const auto& c : classes) {
    const std::size_t k = c.members.size();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        if (mode == DigraphMode::Reduced && i != 0 && j != 0) continue;
        HElement s = make_element(ctx, concat(c.to_first[i], inverse(c.to_first[j])));
        const int xi = c.members[i], xj = c.members[j];
        raw.push_back({F.comp[static_cast<std::size_t>(xi)], F.comp[static_cast<std::size_t>(xj)], table.intern(s),
                       F.vertices[static_cast<std::size_t>(xi)], F.vertices[static_cast<std::size_t>(xj)]});
      }
    }
  }

  // Canonical label order.
  std::vector<int> order(static_cast<std::size_t>(table.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int c) { return label_less(table.at(a), table.at(c)); });
  std::vector<int> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    d.labels.push_back(table.at(order[i]));
  }

  std::map<DigraphEdge, std::pair<Vertex, Vertex>> witness;
  for (const auto& e : raw) witness.emplace(DigraphEdge{e.from, e.to, rank[static_cast<std::size_t>(e.label)]}, std::make_pair(e.x, e.y));
  for (const auto& [e, xy] : witness) {
    d.edges.push_back(e);
    const HElement& s = d.labels[static_cast<std::size_t>(e.label)];
    if (p.is_identity(s.g)) fail(ErrorKind::Precondition, "digraph audit: identity label");
    if (!p.equal(concat(s.g, b.rep(xy.second)), b.rep(xy.first)))
      fail(ErrorKind::Precondition, "digraph audit: edge label does not carry its witness");
  }

  d.label_inverse.assign(d.labels.size(), -1);
  ElementTable lookup(ctx);
  for (const auto& s : d.labels) lookup.intern(s);
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    int j = lookup.find(invert(ctx, d.labels[i]));
    if (j < 0) fail(ErrorKind::Precondition, "digraph audit: label set is not symmetric");
    d.label_inverse[i] = j;
  }
  for (const auto& e : d.edges) {
    DigraphEdge r{e.to, e.from, d.label_inverse[static_cast<std::size_t>(e.label)]};
    if (!std::binary_search(d.edges.begin(), d.edges.end(), r))
      fail(ErrorKind::Precondition, "digraph audit: reverse edge missing");
  }
  d.index_edges();
  return d;
}

std::vector<HElement> adjacency_set(const FiniteCover& F, const SubgroupView& v) {
  return build_digraph(F, v, DigraphMode::Full).labels;
}

std::vector<int> digraph_components(const AdjacencyDigraph& d) {
  std::vector<int> parent(static_cast<std::size_t>(d.vertex_count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& e : d.edges) {
    int a = find(e.from), c = find(e.to);
    if (a != c) parent[static_cast<std::size_t>(std::max(a, c))] = std::min(a, c);
  }
  std::vector<int> id(static_cast<std::size_t>(d.vertex_count), -1), out(static_cast<std::size_t>(d.vertex_count));
  int next = 0;
  for (int x = 0; x < d.vertex_count; ++x) {
    int r = find(x);
    if (id[static_cast<std::size_t>(r)] < 0) id[static_cast<std::size_t>(r)] = next++;
    out[static_cast<std::size_t>(x)] = id[static_cast<std::size_t>(r)];
  }
  return out;
}

int digraph_component_count(const AdjacencyDigraph& d) {
  auto c = digraph_components(d);
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

namespace {

class Enumerator {
 public:
  Enumerator(const AdjacencyDigraph& d, std::int64_t budget)
      : d_(d), budget_(budget), on_path_(static_cast<std::size_t>(d.vertex_count), 0) {}

  // Calls f(end, label) for every simple path starting at s, including the
  // empty one; with close_at >= 0 only for paths returning to close_at.
  template <class F>
  void simple_paths(int s, int close_at, F&& f) {
    YWord label;
    on_path_[static_cast<std::size_t>(s)] = 1;
    if (close_at < 0) f(s, label);
    dfs(s, close_at, label, f);
    on_path_[static_cast<std::size_t>(s)] = 0;
  }

  std::int64_t steps() const { return steps_; }

 private:
  template <class F>
  void dfs(int u, int close_at, YWord& label, F& f) {
    for (int ei : d_.out[static_cast<std::size_t>(u)]) {
      const DigraphEdge& e = d_.edges[static_cast<std::size_t>(ei)];
      if (++steps_ > budget_)
        fail(ErrorKind::CombinatorialBlowup, "simple path enumeration exceeded its budget of " +
                                                 std::to_string(budget_) + " extensions");
      const YWord& s = d_.labels[static_cast<std::size_t>(e.label)].y;
      const std::size_t mark = label.size();
      label.insert(label.end(), s.begin(), s.end());
      if (close_at >= 0 && e.to == close_at) {
        f(e.to, label);
      } else if (!on_path_[static_cast<std::size_t>(e.to)]) {
        on_path_[static_cast<std::size_t>(e.to)] = 1;
        if (close_at < 0) f(e.to, label);
        dfs(e.to, close_at, label, f);
        on_path_[static_cast<std::size_t>(e.to)] = 0;
      }
      label.resize(mark);
    }
  }

  const AdjacencyDigraph& d_;
  std::int64_t budget_;
  std::int64_t steps_ = 0;
  std::vector<char> on_path_;
};

void check_vertex(const AdjacencyDigraph& d, int v) {
  if (v < 0 || v >= d.vertex_count) fail(ErrorKind::Domain, "digraph vertex out of range");
}

}  // namespace

LanguageSummary language_summary(const AdjacencyDigraph& d, const SubgroupContext& ctx, int v0, int v1,
                                 std::int64_t budget) {
  check_vertex(d, v0);
  check_vertex(d, v1);
  LanguageSummary out;
  out.v0 = v0;
  out.v1 = v1;
  Enumerator en(d, budget);
  ElementTable K(ctx), T(ctx);
  std::vector<std::vector<YWord>> paths(static_cast<std::size_t>(d.vertex_count));
  en.simple_paths(v0, -1, [&](int end, const YWord& w) {
    paths[static_cast<std::size_t>(end)].push_back(w);
    if (end == v1) T.intern(make_element(ctx, w));
  });
  const GroupPresentation& p = ctx.presentation();
  for (int u = 0; u < d.vertex_count; ++u) {
    const auto& pu = paths[static_cast<std::size_t>(u)];
    if (pu.empty()) continue;
    std::vector<YWord> loops;
    Enumerator le(d, budget - en.steps() - out.steps);
    le.simple_paths(u, u, [&](int, const YWord& w) { loops.push_back(w); });
    out.steps += le.steps();
    for (const auto& path : pu) {
      for (const auto& loop : loops) {
        HElement k = make_element(ctx, concat(concat(path, loop), inverse(path)));
        if (!p.is_identity(k.g)) K.intern(k);
      }
    }
  }
  out.steps += en.steps();
  out.K_gens = K.items();
  out.T_reps = T.items();
  return out;
}

LanguageSummary schreier_summary(const AdjacencyDigraph& d, const SubgroupContext& ctx, int v0, int v1) {
  check_vertex(d, v0);
  check_vertex(d, v1);
  LanguageSummary out;
  out.v0 = v0;
  out.v1 = v1;
  out.lollipop = false;
  std::vector<YWord> tree(static_cast<std::size_t>(d.vertex_count));
  std::vector<char> seen(static_cast<std::size_t>(d.vertex_count), 0);
  std::vector<int> queue{v0};
  seen[static_cast<std::size_t>(v0)] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (int ei : d.out[static_cast<std::size_t>(u)]) {
      const DigraphEdge& e = d.edges[static_cast<std::size_t>(ei)];
      ++out.steps;
      if (seen[static_cast<std::size_t>(e.to)]) continue;
      seen[static_cast<std::size_t>(e.to)] = 1;
      tree[static_cast<std::size_t>(e.to)] =
          free_reduce(concat(tree[static_cast<std::size_t>(u)], d.labels[static_cast<std::size_t>(e.label)].y));
      queue.push_back(e.to);
    }
  }
  ElementTable K(ctx);
  const GroupPresentation& p = ctx.presentation();
  for (int u : queue) {
    for (int ei : d.out[static_cast<std::size_t>(u)]) {
      const DigraphEdge& e = d.edges[static_cast<std::size_t>(ei)];
      HElement k = make_element(ctx, concat(concat(tree[static_cast<std::size_t>(u)], d.labels[static_cast<std::size_t>(e.label)].y),
                                            inverse(tree[static_cast<std::size_t>(e.to)])));
      if (!p.is_identity(k.g)) K.intern(k);
    }
  }
  out.K_gens = K.items();
  if (seen[static_cast<std::size_t>(v1)]) out.T_reps.push_back(make_element(ctx, tree[static_cast<std::size_t>(v1)]));
  return out;
}

std::string export_dot(const AdjacencyDigraph& d, const GroupPresentation& p) {
  std::ostringstream os;
  os << "digraph delta {\n";
  for (int v = 0; v < d.vertex_count; ++v)
    os << "  " << v << (d.marked[static_cast<std::size_t>(v)] ? " [shape=doublecircle];\n" : " [shape=circle];\n");
  for (const auto& e : d.edges)
    os << "  " << e.from << " -> " << e.to << " [label=\""
       << p.alphabet().format(d.labels[static_cast<std::size_t>(e.label)].g) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace hyp
