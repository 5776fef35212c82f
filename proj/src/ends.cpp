#include "hyp/ends.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hyp/error.hpp"

namespace hyp {

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

const char* filtered_kind_name(FilteredResult::Kind k) {
  switch (k) {
    case FilteredResult::Kind::Finite: return "finite";
    case FilteredResult::Kind::AtLeast: return "at_least";
    case FilteredResult::Kind::BudgetExhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

// ---------------------------------------------------------------------------

FoldingOracle::FoldingOracle(const SubgroupContext& ctx) : rank_(ctx.rank()) {
  if (!ctx.y_free())
    fail(ErrorKind::Precondition, "the folding oracle needs a subgroup known to be free on its generators");
}

Tri FoldingOracle::member(const YWord& h, const std::vector<YWord>& gens) {
  ++calls_;
  return folded_member(fold(rank_, gens), h) ? Tri::Yes : Tri::No;
}

std::optional<std::int64_t> FoldingOracle::index(const std::vector<YWord>& gens) const {
  FoldedGraph f = fold(rank_, gens);
  for (int v = 0; v < f.vertex_count(); ++v)
    for (int x = 0; x < 2 * rank_; ++x)
      if (f.target(v, static_cast<Letter>(x)) < 0) return std::nullopt;
  return f.vertex_count();
}

BoundedSearchOracle::BoundedSearchOracle(const SubgroupContext& ctx, std::int64_t budget)
    : ctx_(&ctx), budget_(budget) {}

Tri BoundedSearchOracle::member(const YWord& h, const std::vector<YWord>& gens) {
  ++calls_;
  const GroupPresentation& p = ctx_->presentation();
  const Word target_inv = inverse(ctx_->evaluate(h));
  if (p.is_identity(target_inv)) return Tri::Yes;
  if (gens.empty()) return Tri::No;
  // Freely reduced words over the generators of the queried subgroup.
  struct Node {
    Word g;
    Letter last;
  };
  const int A = 2 * static_cast<int>(gens.size());
  std::vector<Word> letters;
  for (const auto& y : gens) {
    Word e = ctx_->evaluate(y);
    letters.push_back(e);
    letters.push_back(inverse(e));
  }
  std::vector<Node> frontier{{Word{}, static_cast<Letter>(A)}};
  std::int64_t spent = 0;
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const auto& n : frontier) {
      for (int x = 0; x < A; ++x) {
        if (n.last < A && static_cast<int>(inv(n.last)) == x) continue;
        if (++spent > budget_) return Tri::Unknown;
        Word g = free_reduce(concat(n.g, letters[static_cast<std::size_t>(x)]));
        if (p.is_identity(concat(target_inv, g))) return Tri::Yes;
        next.push_back({std::move(g), static_cast<Letter>(x)});
      }
    }
    frontier = std::move(next);
  }
  return Tri::Unknown;
}

std::unique_ptr<GwpOracle> default_oracle(const SubgroupContext& ctx, std::int64_t budget) {
  if (ctx.y_free()) return std::make_unique<FoldingOracle>(ctx);
  return std::make_unique<BoundedSearchOracle>(ctx, budget);
}

// ---------------------------------------------------------------------------

ComponentModel component_model(const SubgroupView& v, const ConstantLedger& g) {
  const SubgroupContext& ctx = v.context();
  ComponentModel m{minimal_cover(v, g), {}, {}, {}, {}, {}, {}};
  m.digraph = build_digraph(m.cover, v, DigraphMode::Reduced);
  const AdjacencyDigraph& d = m.digraph;
  m.dcomp = digraph_components(d);
  const int ncomp = d.vertex_count == 0 ? 0 : *std::max_element(m.dcomp.begin(), m.dcomp.end()) + 1;
  m.base.assign(static_cast<std::size_t>(ncomp), -1);
  m.K.assign(static_cast<std::size_t>(ncomp), {});
  m.tree_path.assign(static_cast<std::size_t>(d.vertex_count), {});
  std::vector<char> has_mark(static_cast<std::size_t>(ncomp), 0);
  for (int u = 0; u < d.vertex_count; ++u) {
    const int c = m.dcomp[static_cast<std::size_t>(u)];
    if (m.base[static_cast<std::size_t>(c)] < 0) m.base[static_cast<std::size_t>(c)] = u;
    if (d.marked[static_cast<std::size_t>(u)]) has_mark[static_cast<std::size_t>(c)] = 1;
  }
  // Spanning tree by breadth-first search over edges in either direction.
  std::vector<std::vector<std::pair<int, YWord>>> adj(static_cast<std::size_t>(d.vertex_count));
  for (const auto& e : d.edges) {
    const YWord& s = d.labels[static_cast<std::size_t>(e.label)].y;
    adj[static_cast<std::size_t>(e.from)].push_back({e.to, s});
    adj[static_cast<std::size_t>(e.to)].push_back({e.from, inverse(s)});
  }
  std::vector<char> seen(static_cast<std::size_t>(d.vertex_count), 0);
  for (int c = 0; c < ncomp; ++c) {
    const int b = m.base[static_cast<std::size_t>(c)];
    std::vector<int> queue{b};
    seen[static_cast<std::size_t>(b)] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int u = queue[h];
      for (const auto& [to, s] : adj[static_cast<std::size_t>(u)]) {
        if (seen[static_cast<std::size_t>(to)]) continue;
        seen[static_cast<std::size_t>(to)] = 1;
        m.tree_path[static_cast<std::size_t>(to)] = free_reduce(concat(m.tree_path[static_cast<std::size_t>(u)], s));
        queue.push_back(to);
      }
    }
  }
  const GroupPresentation& p = ctx.presentation();
  std::vector<std::set<YWord>> K(static_cast<std::size_t>(ncomp));
  for (const auto& e : d.edges) {
    const YWord& s = d.labels[static_cast<std::size_t>(e.label)].y;
    YWord k = free_reduce(concat(concat(m.tree_path[static_cast<std::size_t>(e.from)], s),
                                 inverse(m.tree_path[static_cast<std::size_t>(e.to)])));
    if (k.empty() || p.is_identity(ctx.evaluate(k))) continue;
    K[static_cast<std::size_t>(m.dcomp[static_cast<std::size_t>(e.from)])].insert(k);
  }
  for (int c = 0; c < ncomp; ++c) {
    m.K[static_cast<std::size_t>(c)].assign(K[static_cast<std::size_t>(c)].begin(), K[static_cast<std::size_t>(c)].end());
    if (has_mark[static_cast<std::size_t>(c)]) m.orbits.push_back(c);
  }
  return m;
}

namespace {

// Classes (D, g K_D) of pieces, kept as pairwise distinct representatives.
struct ClassTable {
  const ComponentModel* m;
  GwpOracle* oracle;
  std::map<int, std::vector<YWord>> reps;
  std::vector<std::pair<int, YWord>> order;
  std::int64_t unresolved = 0;

  // Index of the class of (D, g): existing, new (when every test says No), or
  // -1 when some test is Unknown and none says Yes.
  int classify(int D, const YWord& g, bool insert) {
    auto& rs = reps[D];
    bool unknown = false;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      Tri t = oracle->member(free_reduce(concat(inverse(rs[i]), g)), m->K[static_cast<std::size_t>(D)]);
      if (t == Tri::Yes) return index_of(D, i);
      if (t == Tri::Unknown) unknown = true;
    }
    if (unknown) {
      ++unresolved;
      return -1;
    }
    if (!insert) return -1;
    rs.push_back(g);
    order.push_back({D, g});
    return static_cast<int>(order.size()) - 1;
  }
  int index_of(int D, std::size_t i) const {
    const YWord& g = reps.at(D)[i];
    for (std::size_t k = 0; k < order.size(); ++k)
      if (order[k].first == D && order[k].second == g) return static_cast<int>(k);
    return -1;
  }
  int size() const { return static_cast<int>(order.size()); }
};

// Freely reduced Y-words of length exactly n.
std::vector<YWord> sphere_words(int rank, int n) {
  std::vector<YWord> cur{YWord{}};
  for (int i = 0; i < n; ++i) {
    std::vector<YWord> next;
    for (const auto& w : cur)
      for (int x = 0; x < 2 * rank; ++x) {
        if (!w.empty() && w.back() == inv(static_cast<Letter>(x))) continue;
        YWord u = w;
        u.push_back(static_cast<Letter>(x));
        next.push_back(std::move(u));
      }
    cur = std::move(next);
  }
  return cur;
}

struct Growth {
  FilteredResult result;
  ClassTable table;
  bool stabilized = false;
};

// Runs generations until N_{i+1} = N_i with no unresolved comparisons, or
// until `stop_at` certified classes are known, or the budget runs out.
Growth grow(const ComponentModel& m, const SubgroupContext& ctx, GwpOracle& oracle, const FilteredBudget& budget,
            int stop_at) {
  Growth out{{}, ClassTable{&m, &oracle, {}, {}, 0}, false};
  out.result.oracle = oracle.name();
  const std::int64_t calls0 = oracle.calls();
  std::int64_t pieces = 0;
  std::vector<char> in_orbit(m.K.size(), 0);
  for (int D : m.orbits) in_orbit[static_cast<std::size_t>(D)] = 1;
  auto finish = [&](FilteredResult::Kind k) {
    out.result.kind = k;
    out.result.n = out.table.size();
    out.result.oracle_calls = oracle.calls() - calls0;
  };
  for (int i = 0; i <= budget.max_generations; ++i) {
    for (const auto& h : sphere_words(ctx.rank(), i)) {
      for (int u = 0; u < m.digraph.vertex_count; ++u) {
        const int D = m.dcomp[static_cast<std::size_t>(u)];
        if (!in_orbit[static_cast<std::size_t>(D)]) continue;
        if (++pieces > budget.max_pieces) {
          finish(out.table.unresolved ? FilteredResult::Kind::AtLeast : FilteredResult::Kind::BudgetExhausted);
          return out;
        }
        out.table.classify(D, free_reduce(concat(h, inverse(m.tree_path[static_cast<std::size_t>(u)]))), true);
      }
    }
    out.result.sequence.push_back(out.table.size());
    const auto& s = out.result.sequence;
    if (stop_at >= 0 && out.table.size() >= stop_at) {
      finish(FilteredResult::Kind::AtLeast);
      return out;
    }
    if (out.table.unresolved == 0 && s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2]) {
      out.stabilized = true;
      finish(FilteredResult::Kind::Finite);
      return out;
    }
    if (m.orbits.empty()) {
      out.stabilized = true;
      finish(FilteredResult::Kind::Finite);
      return out;
    }
  }
  finish(out.table.unresolved ? FilteredResult::Kind::AtLeast : FilteredResult::Kind::BudgetExhausted);
  return out;
}

}  // namespace

FilteredResult filtered_ends(const SubgroupView& v, const ConstantLedger& g, GwpOracle& oracle,
                             const FilteredBudget& budget) {
  ComponentModel m = component_model(v, g);
  return grow(m, v.context(), oracle, budget, -1).result;
}

Tri filtered_ends_at_least(const SubgroupView& v, const ConstantLedger& g, int N, GwpOracle& oracle,
                           const FilteredBudget& budget) {
  if (N <= 0) return Tri::Yes;
  ComponentModel m = component_model(v, g);
  Growth r = grow(m, v.context(), oracle, budget, N);
  if (r.table.size() >= N) return Tri::Yes;
  if (r.stabilized && oracle.exact()) return Tri::No;
  if (r.stabilized && r.table.unresolved == 0) return Tri::No;
  return Tri::Unknown;
}

bool is_finite_index(const SubgroupView& v, const ConstantLedger& g) {
  return minimal_cover(v, g).marked_count() == 0;
}

ComponentAction component_action(const SubgroupView& v, const ConstantLedger& g, GwpOracle& oracle,
                                 const FilteredBudget& budget) {
  const SubgroupContext& ctx = v.context();
  ComponentModel m = component_model(v, g);
  Growth r = grow(m, ctx, oracle, budget, -1);
  if (r.result.kind != FilteredResult::Kind::Finite)
    fail(ErrorKind::Precondition, "the component action needs a finite, certified filtered count");
  ComponentAction a;
  a.n = r.table.size();
  a.components = r.table.order;
  for (int y = 0; y < ctx.rank(); ++y) {
    std::vector<int> perm(static_cast<std::size_t>(a.n), -1);
    for (int c = 0; c < a.n; ++c) {
      const auto& [D, rep] = a.components[static_cast<std::size_t>(c)];
      YWord img = free_reduce(concat(YWord{gen_letter(y)}, rep));
      int t = r.table.classify(D, img, false);
      if (t < 0)
        fail(ErrorKind::BudgetExhausted, "could not identify the image of a component under a subgroup generator");
      perm[static_cast<std::size_t>(c)] = t;
    }
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (int c = 0; c < a.n; ++c)
      if (sorted[static_cast<std::size_t>(c)] != c)
        fail(ErrorKind::Precondition, "a subgroup generator does not permute the components");
    a.perms.push_back(std::move(perm));
  }
  // Image group by breadth-first search; word w acts as the composite of its
  // letters with the first letter applied last.
  std::vector<std::vector<int>> inv_perms;
  for (const auto& p : a.perms) {
    std::vector<int> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    inv_perms.push_back(std::move(q));
  }
  auto act = [&](Letter x) -> const std::vector<int>& {
    return (x & 1u) ? inv_perms[x / 2] : a.perms[x / 2];
  };
  std::vector<int> id(static_cast<std::size_t>(a.n));
  for (int i = 0; i < a.n; ++i) id[static_cast<std::size_t>(i)] = i;
  std::map<std::vector<int>, YWord> transversal{{id, YWord{}}};
  std::vector<std::vector<int>> queue{id};
  constexpr std::size_t kMaxImage = 100'000;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::vector<int> sigma = queue[h];
    const YWord t = transversal.at(sigma);
    for (int x = 0; x < 2 * ctx.rank(); ++x) {
      const auto& px = act(static_cast<Letter>(x));
      std::vector<int> tau(static_cast<std::size_t>(a.n));
      for (int i = 0; i < a.n; ++i) tau[static_cast<std::size_t>(i)] = sigma[static_cast<std::size_t>(px[static_cast<std::size_t>(i)])];
      if (transversal.count(tau)) continue;
      if (transversal.size() >= kMaxImage) fail(ErrorKind::BudgetExhausted, "image of the component action is too large");
      YWord w = t;
      w.push_back(static_cast<Letter>(x));
      transversal.emplace(tau, free_reduce(w));
      queue.push_back(std::move(tau));
    }
  }
  a.kernel_index = static_cast<std::int64_t>(transversal.size());
  std::set<YWord> kernel;
  for (const auto& [sigma, t] : transversal) {
    for (int y = 0; y < ctx.rank(); ++y) {
      const auto& py = a.perms[static_cast<std::size_t>(y)];
      std::vector<int> tau(static_cast<std::size_t>(a.n));
      for (int i = 0; i < a.n; ++i) tau[static_cast<std::size_t>(i)] = sigma[static_cast<std::size_t>(py[static_cast<std::size_t>(i)])];
      YWord k = free_reduce(concat(concat(t, YWord{gen_letter(y)}), inverse(transversal.at(tau))));
      if (!k.empty()) kernel.insert(k);
    }
  }
  a.kernel_generators.assign(kernel.begin(), kernel.end());
  std::sort(a.kernel_generators.begin(), a.kernel_generators.end(),
            [](const YWord& x, const YWord& y) { return shortlex_less(x, y); });
  return a;
}

// ---------------------------------------------------------------------------

ConstantLedger with_triple(const ConstantLedger& g, int r, int K, int R) {
  ConstantInputs in;
  in.delta = g.delta;
  in.Q = g.Q;
  in.lambda = g.lambda;
  in.epsilon = g.epsilon;
  in.n = g.n;
  in.a = g.a;
  in.k1 = g.k1;
  in.k2 = g.k2;
  in.eta_override = g.eta;
  return desk_constants(in, r, K, R);
}

EndsReport ends_of_pair(const SubgroupView& v, const ConstantLedger& g, const EndsOptions& opt) {
  EndsReport rep;
  rep.constants = g;
  const CayleyBall& b = v.ball();
  std::vector<std::array<int, 3>> ladder = opt.ladder;
  if (ladder.empty()) ladder = {{g.r, g.K, g.R}, {g.r + 1, g.K + 1, g.R + 1}};
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto [r, K, R] = ladder[i];
    ConstantLedger gi = (r == g.r && K == g.K && R == g.R) ? g : with_triple(g, r, K, R);
    if (R + 1 > b.radius()) {
      if (i == 0)
        fail(ErrorKind::InsufficientRadius, "the cover for (r,K,R)=(" + std::to_string(r) + "," + std::to_string(K) +
                                                "," + std::to_string(R) + ") needs ball radius " +
                                                std::to_string(R + 1));
      rep.notes.push_back("ladder stopped before (" + std::to_string(r) + "," + std::to_string(K) + "," +
                          std::to_string(R) + "): ball radius " + std::to_string(b.radius()) + " is below " +
                          std::to_string(R + 1));
      break;
    }
    ComponentModel m = component_model(v, gi);
    LadderRung rung;
    rung.r = r;
    rung.K = K;
    rung.R = R;
    rung.e_pair = static_cast<int>(m.orbits.size());
    rung.cover_size = static_cast<int>(m.cover.size());
    rung.cover_components = static_cast<int>(m.cover.components.size());
    rung.marked_components = m.cover.marked_count();
    rung.digraph_components = static_cast<int>(m.K.size());
    rep.budget_spent += static_cast<std::int64_t>(m.cover.size()) + static_cast<std::int64_t>(m.digraph.edges.size());
    if (i == 0) rep.finite_index = rung.marked_components == 0;
    rep.stabilization.push_back(rung);
  }
  const auto& s = rep.stabilization;
  if (s.size() >= 2 && s[s.size() - 1].e_pair == s[s.size() - 2].e_pair) {
    rep.stabilized = true;
    rep.e_pair = s.back().e_pair;
  }
  const int L = 2 * v.context().l() + g.R;
  if (L <= b.radius() && b.complete()) {
    rep.upper_bound = b.layer_begin(L + 1);
  } else {
    CayleyBall big = build_ball(b.presentation_ptr(), L, opt.upper_bound_vertex_budget);
    if (big.complete()) rep.upper_bound = big.size();
  }
  if (opt.filtered) {
    auto oracle = default_oracle(v.context(), opt.oracle_budget);
    rep.filtered = filtered_ends(v, g, *oracle, opt.filtered_budget);
    rep.budget_spent += rep.filtered->oracle_calls;
  }
  return rep;
}

}  // namespace hyp
