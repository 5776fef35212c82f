#include "hyp/splittings.hpp"

#include <algorithm>
#include <map>

#include "hyp/error.hpp"

namespace hyp {

const char* comm_status_name(CommStatus s) {
  switch (s) {
    case CommStatus::Member: return "member";
    case CommStatus::NonMember: return "non_member";
    case CommStatus::Unknown: return "unknown";
  }
  return "unknown";
}

const char* pattern_name(int i) {
  static const char* names[] = {"U&gU", "U&gU*", "U*&gU", "U*&gU*"};
  return names[i];
}

const char* crossings_outcome_name(CrossingsReport::Outcome o) {
  switch (o) {
    case CrossingsReport::Outcome::AllCrossed: return "all_crossed";
    case CrossingsReport::Outcome::NoAlmostInvariantSet: return "no_almost_invariant_set";
    case CrossingsReport::Outcome::BudgetExhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

const char* split_mode_name(SplitMode m) {
  switch (m) {
    case SplitMode::FiniteFiltered: return "finite-filtered";
    case SplitMode::Lonely: return "lonely";
    case SplitMode::NotLonely: return "not-lonely";
  }
  return "lonely";
}

const char* split_outcome_name(SplitReport::Outcome o) {
  switch (o) {
    case SplitReport::Outcome::Associated: return "associated";
    case SplitReport::Outcome::NotAssociated: return "not_associated";
    case SplitReport::Outcome::NoAlmostInvariantSet: return "no_almost_invariant_set";
    case SplitReport::Outcome::BudgetExhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

// ---------------------------------------------------------------------------

namespace {

// Vertices of the core of a folded graph: repeatedly drop vertices of
// degree at most one.
std::vector<char> core_of(const std::vector<std::vector<int>>& out) {
  const std::size_t n = out.size();
  std::vector<int> deg(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (int t : out[v]) deg[v] += (t >= 0);
  std::vector<char> alive(n, 1);
  std::vector<int> stack;
  for (std::size_t v = 0; v < n; ++v)
    if (deg[v] <= 1) stack.push_back(static_cast<int>(v));
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!alive[static_cast<std::size_t>(v)]) continue;
    alive[static_cast<std::size_t>(v)] = 0;
    for (int t : out[static_cast<std::size_t>(v)]) {
      if (t < 0 || !alive[static_cast<std::size_t>(t)]) continue;
      if (--deg[static_cast<std::size_t>(t)] <= 1) stack.push_back(t);
    }
  }
  return alive;
}

std::vector<std::vector<int>> adjacency(const FoldedGraph& f) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(f.vertex_count()));
  for (int v = 0; v < f.vertex_count(); ++v)
    for (int x = 0; x < 2 * f.rank(); ++x) out[static_cast<std::size_t>(v)].push_back(f.target(v, static_cast<Letter>(x)));
  return out;
}

struct Pullback {
  std::optional<std::int64_t> index_H, index_Hg;
  std::vector<Word> loops;  // generators of the intersection from a spanning tree
};

// Fibre product of the folded graphs of H and H^g at the pair of roots.  The
// intersection has finite index in a factor exactly when the core of the
// product covers the core of that factor.
Pullback free_pullback(const FoldedGraph& a, const FoldedGraph& b) {
  const int A = 2 * a.rank();
  std::map<std::pair<int, int>, int> id{{{0, 0}, 0}};
  std::vector<std::pair<int, int>> node{{0, 0}};
  std::vector<std::vector<int>> out;
  std::vector<Word> tree{Word{}};
  for (std::size_t h = 0; h < node.size(); ++h) {
    out.emplace_back(static_cast<std::size_t>(A), -1);
    auto [u, v] = node[h];
    for (int x = 0; x < A; ++x) {
      int tu = a.target(u, static_cast<Letter>(x)), tv = b.target(v, static_cast<Letter>(x));
      if (tu < 0 || tv < 0) continue;
      auto [it, fresh] = id.emplace(std::make_pair(tu, tv), static_cast<int>(node.size()));
      if (fresh) {
        node.push_back({tu, tv});
        Word w = tree[h];
        w.push_back(static_cast<Letter>(x));
        tree.push_back(w);
      }
      out[h][static_cast<std::size_t>(x)] = it->second;
    }
  }
  Pullback pb;
  for (std::size_t h = 0; h < node.size(); ++h)
    for (int x = 0; x < A; x += 2) {
      int t = out[h][static_cast<std::size_t>(x)];
      if (t < 0) continue;
      Word loop = free_reduce(concat(concat(tree[h], Word{static_cast<Letter>(x)}), inverse(tree[static_cast<std::size_t>(t)])));
      if (!loop.empty()) pb.loops.push_back(loop);
    }
  std::sort(pb.loops.begin(), pb.loops.end(), [](const Word& x, const Word& y) { return shortlex_less(x, y); });
  pb.loops.erase(std::unique(pb.loops.begin(), pb.loops.end()), pb.loops.end());

  const auto core_p = core_of(out);
  auto covers = [&](const FoldedGraph& f, bool first) -> std::optional<std::int64_t> {
    const auto core_f = core_of(adjacency(f));
    std::int64_t nf = 0, np = 0;
    for (char c : core_f) nf += c;
    for (char c : core_p) np += c;
    if (nf == 0) return 1;  // trivial factor
    if (np == 0) return std::nullopt;
    for (std::size_t h = 0; h < node.size(); ++h) {
      if (!core_p[h]) continue;
      const int u = first ? node[h].first : node[h].second;
      if (!core_f[static_cast<std::size_t>(u)]) return std::nullopt;
      for (int x = 0; x < A; ++x) {
        int tf = f.target(u, static_cast<Letter>(x));
        if (tf < 0 || !core_f[static_cast<std::size_t>(tf)]) continue;
        int tp = out[h][static_cast<std::size_t>(x)];
        if (tp < 0 || !core_p[static_cast<std::size_t>(tp)]) return std::nullopt;
      }
    }
    return np / nf;
  };
  pb.index_H = covers(a, true);
  pb.index_Hg = covers(b, false);
  return pb;
}

std::vector<Word> sphere_y_words(int rank, int n) {
  std::vector<Word> cur{Word{}};
  for (int i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : cur)
      for (int x = 0; x < 2 * rank; ++x) {
        if (!w.empty() && w.back() == inv(static_cast<Letter>(x))) continue;
        Word u = w;
        u.push_back(static_cast<Letter>(x));
        next.push_back(std::move(u));
      }
    cur = std::move(next);
  }
  return cur;
}

// Distinct left cosets of K = H ∩ H^g met by growing balls of `elements`
// (H-elements, or their conjugates by g).  same(a, b) decides a^-1 b in K.
// Equal counts at consecutive radii fix the index: every element of the
// next sphere is a generator times an element already represented.
template <class Same>
std::optional<std::int64_t> coset_count(const SubgroupContext& ctx, int max_radius, std::int64_t& tests,
                                        std::int64_t max_tests, Same same, std::vector<int>& trace) {
  std::vector<Word> reps;
  for (int i = 0; i <= max_radius; ++i) {
    for (const auto& y : sphere_y_words(ctx.rank(), i)) {
      Word h = ctx.evaluate(y);
      bool found = false;
      for (const auto& r : reps) {
        if (++tests > max_tests) return std::nullopt;
        if (same(r, h)) {
          found = true;
          break;
        }
      }
      if (!found) reps.push_back(h);
    }
    trace.push_back(static_cast<int>(reps.size()));
    if (trace.size() >= 2 && trace[trace.size() - 1] == trace[trace.size() - 2]) return trace.back();
  }
  return std::nullopt;
}

}  // namespace

CommVerdict commensurator_member(const SubgroupView& v, const Word& g0, const CommBudget& budget) {
  const SubgroupContext& ctx = v.context();
  const GroupPresentation& p = ctx.presentation();
  CommVerdict out;
  out.g = free_reduce(g0);
  const Word& g = out.g;
  const Word gi = inverse(g);
  auto in_Hg = [&](const Word& x) { return ctx.contains(concat(concat(g, x), gi)); };

  out.evidence_radius = std::min(budget.evidence_radius, v.exact_radius());
  try {
    for (Vertex h : v.subgroup_ball(out.evidence_radius)) {
      if (h == 0) continue;
      Word hw = v.ball().rep(h);
      ++out.budget_spent;
      if (in_Hg(hw)) out.intersection.push_back(hw);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
  }

  if (g.empty() || ctx.contains(g)) {
    out.verdict = CommStatus::Member;
    out.method = "in-subgroup";
    out.index_H = out.index_Hg = 1;
    return out;
  }
  if (const auto& fH = ctx.folded()) {
    std::vector<Word> conj;
    for (const auto& y : ctx.generators()) conj.push_back(free_reduce(concat(concat(gi, y), g)));
    FoldedGraph fg = fold(p.rank(), conj);
    Pullback pb = free_pullback(*fH, fg);
    out.method = "free-pullback";
    out.index_H = pb.index_H;
    out.index_Hg = pb.index_Hg;
    out.verdict = pb.index_H && pb.index_Hg ? CommStatus::Member : CommStatus::NonMember;
    return out;
  }
  if (ctx.rank() == 1 && ctx.y_free()) {
    // Torsion-free: the commensurator of <w> is the cyclic maximal
    // elementary subgroup containing w, i.e. the centraliser of w.
    const Word w = ctx.evaluate({0});
    out.method = "cyclic-centraliser";
    ++out.budget_spent;
    bool commutes = p.is_identity(concat(concat(g, w), concat(gi, inverse(w))));
    out.verdict = commutes ? CommStatus::Member : CommStatus::NonMember;
    if (commutes) out.index_H = out.index_Hg = 1;
    return out;
  }
  out.method = "coset-stabilisation";
  std::int64_t tests = 0;
  try {
    out.index_H = coset_count(ctx, budget.max_radius, tests, budget.max_tests,
                              [&](const Word& a, const Word& b) { return in_Hg(concat(inverse(a), b)); }, out.trace_H);
    if (out.index_H) {
      // Elements of H^g are g^-1 h g; (g^-1 a g)^-1 (g^-1 b g) lies in K iff
      // g^-1 a^-1 b g lies in H.
      out.index_Hg = coset_count(ctx, budget.max_radius, tests, budget.max_tests,
                                 [&](const Word& a, const Word& b) {
                                   return ctx.contains(concat(concat(gi, concat(inverse(a), b)), g));
                                 },
                                 out.trace_Hg);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
  }
  out.budget_spent += tests;
  if (out.index_H && out.index_Hg) {
    out.verdict = CommStatus::Member;
  } else {
    out.verdict = CommStatus::Unknown;
    out.method = "budget";
  }
  return out;
}

// ---------------------------------------------------------------------------

SideMap::SideMap(const SubgroupView& v, const ConstantLedger& g)
    : v_(&v), g_(g), model_(component_model(v, g)), memo_(static_cast<std::size_t>(v.ball().size()), -2) {
  const FiniteCover& F = model_.cover;
  for (std::size_t i = 0; i < F.size(); ++i)
    if (F.heights[i] == g.K) onK_[v.context().coset_invariant(v.ball().rep(F.vertices[i]))].push_back(F.vertices[i]);
}

int SideMap::side_on_CK(Vertex z) {
  const auto it = onK_.find(v_->context().coset_invariant(v_->ball().rep(z)));
  if (it == onK_.end()) return -1;
  for (Vertex f : it->second)
    if (v_->same_coset(f, z))
      return model_.dcomp[static_cast<std::size_t>(model_.cover.component_of(f))];
  return -1;
}

int SideMap::side(Vertex x) {
  const CayleyBall& b = v_->ball();
  std::vector<Vertex> path;
  Vertex cur = x;
  int result = -1;
  for (;;) {
    int& m = memo_[static_cast<std::size_t>(cur)];
    if (m != -2) {
      result = m;
      break;
    }
    int h;
    try {
      h = v_->height(cur);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientRadius) throw;
      result = -1;
      path.push_back(cur);
      break;
    }
    path.push_back(cur);
    if (h < g_.K) {
      result = -1;
      break;
    }
    if (h == g_.K) {
      result = side_on_CK(cur);
      break;
    }
    Vertex next = kNone;
    for (int s = 0; s < b.degree() && next == kNone; ++s) {
      Vertex y = b.neighbor(cur, static_cast<Letter>(s));
      if (y == kNone) continue;
      try {
        if (v_->height(y) == h - 1) next = y;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientRadius) throw;
      }
    }
    if (next == kNone) {
      result = -1;
      break;
    }
    cur = next;
  }
  for (Vertex u : path) memo_[static_cast<std::size_t>(u)] = result;
  return result;
}

bool CrossingCertificate::complete() const { return found() == 4; }

int CrossingCertificate::found() const {
  int n = 0;
  for (const auto& w : witnesses) n += w.has_value();
  return n;
}

CrossingCertificate crossing_witness(SideMap& sides, const std::vector<int>& U, const Word& g0,
                                     const CrossingBudget& budget) {
  const SubgroupView& v = sides.view();
  const ConstantLedger& L = sides.ledger();
  const CayleyBall& b = v.ball();
  CrossingCertificate c;
  c.g = free_reduce(g0);
  c.U = U;
  const int len = static_cast<int>(c.g.size());
  c.r_g = L.r + budget.pad * len;
  c.K = L.K;
  c.delta = L.delta;
  c.threshold_H = L.K;
  c.threshold_gH = L.K + 5 * L.delta + len;
  const Word gi = inverse(c.g);
  auto in_U = [&](int s) { return std::find(U.begin(), U.end(), s) != U.end(); };
  for (Vertex x = 0; x < static_cast<Vertex>(b.size()) && !c.complete(); ++x) {
    if (++c.scanned > budget.max_vertices) break;
    int dH, dgH;
    Vertex y;
    try {
      dH = v.height(x);
      if (dH <= c.threshold_H) continue;
      y = b.locate(concat(gi, b.rep(x)));
      if (y == kNone) {
        ++c.skipped;
        continue;
      }
      dgH = v.height(y);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientRadius) throw;
      ++c.skipped;
      continue;
    }
    if (dgH <= c.threshold_gH || dgH < c.r_g) continue;
    const int sx = sides.side(x), sy = sides.side(y);
    if (sx < 0 || sy < 0) {
      ++c.skipped;
      continue;
    }
    const int pattern = (in_U(sx) ? 0 : 2) + (in_U(sy) ? 0 : 1);
    auto& slot = c.witnesses[static_cast<std::size_t>(pattern)];
    if (!slot) slot = CrossingWitness{b.rep(x), dH, dgH};
  }
  return c;
}

std::vector<std::vector<int>> almost_invariant_classes(const std::vector<int>& orbits) {
  std::vector<std::vector<int>> out;
  const std::size_t m = orbits.size();
  if (m < 2 || m > 20) {
    if (m > 20) fail(ErrorKind::CombinatorialBlowup, "too many orbit classes to enumerate unions");
    return out;
  }
  for (std::uint32_t mask = 1; mask < (1u << m) - 1; ++mask) {
    if (!(mask & 1u)) continue;
    std::vector<int> U;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) U.push_back(orbits[i]);
    out.push_back(std::move(U));
  }
  return out;
}

namespace {

// Resumable form of the crossing search: one group element per step.
class CrossingsRun {
 public:
  CrossingsRun(const SubgroupView& v, const ConstantLedger& g, const CrossingsOptions& opt)
      : v_(v), opt_(opt), sides_(v, g) {
    report_.e_pair = static_cast<int>(sides_.model().orbits.size());
    for (auto& U : almost_invariant_classes(sides_.model().orbits)) report_.classes.push_back({U, {}, {}});
    if (report_.classes.empty()) {
      report_.outcome = CrossingsReport::Outcome::NoAlmostInvariantSet;
      done_ = true;
    }
    const CayleyBall& b = v.ball();
    next_ = 1;
    end_ = b.layer_begin(std::min(opt.max_g_layer, b.radius()) + 1);
  }

  bool done() const { return done_; }
  const CrossingsReport& report() const { return report_; }

  void step() {
    if (done_) return;
    if (next_ >= end_ || report_.elements_tried >= opt_.max_elements) {
      report_.outcome = CrossingsReport::Outcome::BudgetExhausted;
      done_ = true;
      return;
    }
    const Word g = v_.ball().rep(next_++);
    ++report_.elements_tried;
    CommVerdict cv = commensurator_member(v_, g, opt_.comm);
    if (cv.verdict == CommStatus::Member) {
      ++report_.skipped_member;
      return;
    }
    if (cv.verdict == CommStatus::Unknown) {
      ++report_.skipped_unknown;
      return;
    }
    bool all = true;
    for (auto& cls : report_.classes) {
      if (cls.certificate) continue;
      CrossingCertificate c = crossing_witness(sides_, cls.U, g, opt_.crossing);
      if (c.complete()) {
        cls.certificate = c;
        cls.best = c;
      } else {
        if (!cls.best || c.found() > cls.best->found()) cls.best = c;
        all = false;
      }
    }
    if (all) {
      report_.outcome = CrossingsReport::Outcome::AllCrossed;
      done_ = true;
    }
  }

 private:
  const SubgroupView& v_;
  CrossingsOptions opt_;
  SideMap sides_;
  CrossingsReport report_;
  Vertex next_ = 1, end_ = 1;
  bool done_ = false;
};

}  // namespace

CrossingsReport crossings_search(const SubgroupView& v, const ConstantLedger& g, const CrossingsOptions& opt) {
  CrossingsRun run(v, g, opt);
  while (!run.done()) run.step();
  return run.report();
}

// ---------------------------------------------------------------------------

CandidateVerdict verify_candidate_splitting(const SubgroupView& v, const Candidate& c, const CommBudget& budget) {
  const SubgroupContext& ctx = v.context();
  auto cand = std::make_shared<SubgroupContext>(ctx.presentation_ptr(), c.generators, ctx.Q(), c.lambda, c.epsilon);
  SubgroupView cv(cand, v.ball());
  CandidateVerdict out;
  bool unknown = false, no = false;
  auto fold_in = [&](CommStatus s) {
    if (s == CommStatus::NonMember) no = true;
    if (s == CommStatus::Unknown) unknown = true;
  };
  for (const auto& w : c.generators) {
    out.candidate_in_comm_H.push_back(commensurator_member(v, w, budget));
    fold_in(out.candidate_in_comm_H.back().verdict);
  }
  for (const auto& w : ctx.generators()) {
    out.H_in_comm_candidate.push_back(commensurator_member(cv, w, budget));
    fold_in(out.H_in_comm_candidate.back().verdict);
  }
  out.commensurable = no ? Tri::No : unknown ? Tri::Unknown : Tri::Yes;
  return out;
}

SplitReport split_decision(const SubgroupView& v, const ConstantLedger& g, const SplitOptions& opt) {
  const SubgroupContext& ctx = v.context();
  SplitReport rep;
  rep.mode = opt.mode;

  // Subgroup searched by track B.
  std::vector<Word> gens = ctx.generators();
  switch (opt.mode) {
    case SplitMode::Lonely:
      break;
    case SplitMode::FiniteFiltered: {
      auto oracle = default_oracle(ctx, opt.comm.max_tests);
      ComponentAction a = component_action(v, g, *oracle, opt.filtered);
      if (a.kernel_index > 1) {
        gens.clear();
        for (const auto& y : a.kernel_generators) gens.push_back(ctx.evaluate(y));
        rep.notes.push_back("track B runs on the component-fixing subgroup of index " +
                            std::to_string(a.kernel_index));
      }
      break;
    }
    case SplitMode::NotLonely: {
      if (opt.commensurating_element) {
        CommVerdict cv = commensurator_member(v, *opt.commensurating_element, opt.comm);
        if (cv.verdict != CommStatus::Member || ctx.contains(*opt.commensurating_element))
          fail(ErrorKind::Precondition, "the supplied element is not certified to lie in Comm(H) - H");
        rep.notes.push_back("commensurating element outside H verified by " + cv.method);
      } else if (!opt.finite_index_subgroup.empty()) {
        std::vector<YWord> ys;
        for (const auto& w : opt.finite_index_subgroup) {
          auto y = ctx.witness(w);
          if (!y) fail(ErrorKind::Precondition, "a supplied generator does not lie in H");
          ys.push_back(*y);
        }
        if (!ctx.y_free()) fail(ErrorKind::Precondition, "finite index of the supplied subgroup cannot be certified");
        auto idx = FoldingOracle(ctx).index(ys);
        if (!idx) fail(ErrorKind::Precondition, "the supplied subgroup has infinite index in H");
        gens = opt.finite_index_subgroup;
        rep.notes.push_back("track B runs on the supplied subgroup of index " + std::to_string(*idx));
      } else {
        fail(ErrorKind::Precondition,
             "not-lonely mode needs an element of Comm(H) - H or a finite-index subgroup of H");
      }
      break;
    }
  }
  rep.track_b_subgroup = gens;

  std::shared_ptr<const SubgroupContext> ctx_b;
  std::unique_ptr<SubgroupView> view_b;
  const SubgroupView* vb = &v;
  if (gens != ctx.generators()) {
    int extra = 0;
    for (const auto& w : gens) extra = std::max(extra, static_cast<int>(w.size()));
    ctx_b = std::make_shared<SubgroupContext>(ctx.presentation_ptr(), gens, ctx.Q(), ctx.lambda(),
                                              ctx.epsilon() + Rational(extra));
    view_b = std::make_unique<SubgroupView>(ctx_b, v.ball());
    vb = view_b.get();
  }
  CrossingsRun run(*vb, g, opt.crossings);

  auto track_b_concluded = [&] {
    if (!run.done()) return false;
    const auto o = run.report().outcome;
    if (o != CrossingsReport::Outcome::AllCrossed && o != CrossingsReport::Outcome::NoAlmostInvariantSet)
      return false;
    rep.outcome = o == CrossingsReport::Outcome::AllCrossed ? SplitReport::Outcome::NotAssociated
                                                             : SplitReport::Outcome::NoAlmostInvariantSet;
    rep.concluded_by = "B";
    rep.crossings = run.report();
    return true;
  };
  if (track_b_concluded()) return rep;

  std::size_t next_candidate = 0;
  for (int s = 0; s < opt.slices; ++s) {
    const bool a_left = next_candidate < opt.candidates.size();
    if (!a_left && run.done()) break;
    ++rep.slices_used;
    if (a_left) {
      CandidateVerdict cv = verify_candidate_splitting(v, opt.candidates[next_candidate], opt.comm);
      rep.candidate_verdicts.push_back(cv);
      if (cv.commensurable == Tri::Yes) {
        rep.outcome = SplitReport::Outcome::Associated;
        rep.concluded_by = "A";
        rep.candidate = static_cast<int>(next_candidate);
        rep.crossings = run.report();
        return rep;
      }
      ++next_candidate;
    }
    if (!run.done()) run.step();
    if (track_b_concluded()) return rep;
  }
  rep.outcome = SplitReport::Outcome::BudgetExhausted;
  rep.crossings = run.report();
  return rep;
}

}  // namespace hyp
