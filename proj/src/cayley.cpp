#include "hyp/cayley.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <string>

#include "hyp/parallel.hpp"

namespace hyp {

Vertex CayleyBall::layer_begin(int j) const {
  if (j <= 0) return 0;
  if (j > radius_) return static_cast<Vertex>(layer_.size());
  return layer_start_[static_cast<std::size_t>(j)];
}

Word CayleyBall::rep(Vertex v) const {
  Word w;
  while (v != 0) {
    w.push_back(parent_letter(v));
    v = parent(v);
  }
  std::reverse(w.begin(), w.end());
  return w;
}

Vertex CayleyBall::trace(Vertex v, const Word& w) const {
  for (Letter x : w) {
    if (v < 0) return kNone;
    v = neighbor(v, x);
  }
  return v;
}

Vertex CayleyBall::locate(const Word& w) const {
  Word r = free_reduce(w);
  Vertex v = trace(0, r);
  if (v >= 0 || pres_->wp_strategy() == WpStrategy::FreeGroup) return v;
  return trace(0, pres_->dehn_reduce(r));
}

std::int64_t CayleyBall::edge_count() const {
  std::int64_t e = 0;
  for (Vertex n : nbr_)
    if (n >= 0) ++e;
  return e / 2;
}

// ---------------------------------------------------------------------------
// Ball construction: coset enumeration of the trivial subgroup in the Felsch
// style, truncated at the radius.  Every new edge triggers a scan of the
// relator cycles through it; a cycle with a single missing edge yields a
// deduction and a cycle that closes on two different nodes yields a
// coincidence, which is merged with a union-find forward pointer.

namespace {

class FelschBuilder {
 public:
  FelschBuilder(const GroupPresentation& p, int radius, std::int64_t budget)
      : A_(p.alphabet().size()), radius_(radius), budget_(budget) {
    by_first_.resize(static_cast<std::size_t>(A_));
    for (const auto& r : p.symmetrized_relators()) by_first_[r[0]].push_back(r);
    new_node(0);
  }

  bool run() {
    for (std::size_t u = 0; u < layer_.size(); ++u) {
      if (fwd_[u] >= 0 || layer_[u] >= radius_) continue;
      for (int x = 0; x < A_; ++x) {
        int cur = find(static_cast<int>(u));
        if (cur != static_cast<int>(u)) break;
        if (T(cur, x) >= 0) continue;
        if (static_cast<std::int64_t>(layer_.size()) >= budget_) return false;
        int v = new_node(layer_[u] + 1);
        define(cur, x, v);
        drain();
      }
    }
    return true;
  }

  int A_;
  int radius_;
  std::int64_t budget_;
  std::vector<std::vector<Word>> by_first_;
  std::vector<int> table_;
  std::vector<int> layer_;
  std::vector<int> fwd_;
  std::deque<std::pair<int, int>> deductions_;

  int& T(int u, int x) {
    return table_[static_cast<std::size_t>(u) * static_cast<std::size_t>(A_) +
                  static_cast<std::size_t>(x)];
  }

  int new_node(int layer) {
    int id = static_cast<int>(layer_.size());
    layer_.push_back(layer);
    fwd_.push_back(-1);
    table_.resize(table_.size() + static_cast<std::size_t>(A_), -1);
    return id;
  }

  int find(int u) {
    int r = u;
    while (fwd_[static_cast<std::size_t>(r)] >= 0) r = fwd_[static_cast<std::size_t>(r)];
    while (fwd_[static_cast<std::size_t>(u)] >= 0) {
      int n = fwd_[static_cast<std::size_t>(u)];
      fwd_[static_cast<std::size_t>(u)] = r;
      u = n;
    }
    return r;
  }

  void define(int u, int x, int v) {
    T(u, x) = v;
    T(v, inv(static_cast<Letter>(x))) = u;
    deductions_.emplace_back(u, x);
  }

  void drain() {
    while (!deductions_.empty()) {
      auto [u0, x] = deductions_.front();
      deductions_.pop_front();
      for (const Word& r : by_first_[static_cast<std::size_t>(x)]) {
        int u = find(u0);
        if (T(u, x) < 0) break;
        scan(u, r);
      }
    }
  }

  void scan(int u, const Word& r) {
    const int L = static_cast<int>(r.size());
    int f = u, i = 0;
    while (i < L) {
      int n = T(f, r[static_cast<std::size_t>(i)]);
      if (n < 0) break;
      f = n;
      ++i;
    }
    if (i == L) {
      if (f != u) coincidence(f, u);
      return;
    }
    int b = u, j = L;
    while (j > i) {
      int n = T(b, inv(r[static_cast<std::size_t>(j - 1)]));
      if (n < 0) break;
      b = n;
      --j;
    }
    if (j == i) {
      if (f != b) coincidence(f, b);
    } else if (j == i + 1) {
      define(f, r[static_cast<std::size_t>(i)], b);
    }
  }

  void coincidence(int a0, int b0) {
    std::deque<std::pair<int, int>> q;
    q.emplace_back(a0, b0);
    while (!q.empty()) {
      auto [a, b] = q.front();
      q.pop_front();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      fwd_[static_cast<std::size_t>(b)] = a;
      layer_[static_cast<std::size_t>(a)] =
          std::min(layer_[static_cast<std::size_t>(a)], layer_[static_cast<std::size_t>(b)]);
      for (int x = 0; x < A_; ++x) {
        int c = T(b, x);
        if (c < 0) continue;
        T(b, x) = -1;
        Letter ix = inv(static_cast<Letter>(x));
        if (T(c, ix) == b) T(c, ix) = -1;
        c = find(c);
        int a2 = find(a);
        int d = T(a2, x);
        if (d >= 0) {
          q.emplace_back(d, c);
        } else {
          int e = T(c, ix);
          if (e >= 0) {
            q.emplace_back(e, a2);
          } else {
            T(a2, x) = c;
            T(c, ix) = a2;
            deductions_.emplace_back(a2, x);
          }
        }
      }
    }
  }
};

}  // namespace

CayleyBall build_ball(std::shared_ptr<const GroupPresentation> p, int radius,
                      std::int64_t vertex_budget) {
  if (radius < 0) fail(ErrorKind::Domain, "ball radius must be nonnegative");
  if (vertex_budget <= 0) fail(ErrorKind::Domain, "vertex budget must be positive");
  if (!p->verified())
    fail(ErrorKind::StrategyNotVerified,
         "presentation '" + p->name() + "' has no verified word-problem strategy");

  FelschBuilder fb(*p, radius, vertex_budget);
  bool finished = fb.run();

  // Renumber the surviving nodes breadth first in shortlex order.
  const int A = fb.A_;
  std::vector<int> newid(fb.layer_.size(), -1);
  std::vector<int> order;
  order.push_back(0);
  newid[0] = 0;
  CayleyBall b;
  b.radius_ = radius;
  b.degree_ = A;
  b.pres_ = std::move(p);
  b.layer_.push_back(0);
  b.parent_.push_back(kNone);
  b.parent_letter_.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    int u = order[head];
    int lu = b.layer_[head];
    if (lu >= radius) continue;
    for (int x = 0; x < A; ++x) {
      int v = fb.T(u, x);
      if (v < 0) continue;
      v = fb.find(v);
      if (newid[static_cast<std::size_t>(v)] >= 0) continue;
      newid[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
      order.push_back(v);
      b.layer_.push_back(lu + 1);
      b.parent_.push_back(static_cast<Vertex>(head));
      b.parent_letter_.push_back(static_cast<Letter>(x));
    }
  }
  bool consistent = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (fb.layer_[static_cast<std::size_t>(order[i])] != b.layer_[i]) consistent = false;
  if (finished && !consistent)
    fail(ErrorKind::StrategyNotVerified,
         "ball identification left a vertex whose layer disagrees with its distance");

  b.nbr_.assign(order.size() * static_cast<std::size_t>(A), kNone);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int x = 0; x < A; ++x) {
      int v = fb.T(order[i], x);
      if (v < 0) continue;
      int nv = newid[static_cast<std::size_t>(fb.find(v))];
      if (nv >= 0) b.nbr_[i * static_cast<std::size_t>(A) + static_cast<std::size_t>(x)] = nv;
    }
  }
  b.layer_start_.assign(static_cast<std::size_t>(radius) + 2, static_cast<Vertex>(order.size()));
  for (std::size_t i = order.size(); i-- > 0;)
    b.layer_start_[static_cast<std::size_t>(b.layer_[i])] = static_cast<Vertex>(i);
  for (int j = radius; j >= 0; --j)
    if (b.layer_start_[static_cast<std::size_t>(j)] > b.layer_start_[static_cast<std::size_t>(j) + 1])
      b.layer_start_[static_cast<std::size_t>(j)] = b.layer_start_[static_cast<std::size_t>(j) + 1];
  b.complete_ = finished;
  return b;
}

// ---------------------------------------------------------------------------

BallSearch::BallSearch(const CayleyBall& b)
    : b_(b), stamp_(static_cast<std::size_t>(b.size()), 0), dist_(static_cast<std::size_t>(b.size()), 0) {}

void BallSearch::run(const std::vector<Vertex>& sources, int max_depth) {
  run_filtered(sources, max_depth, [](Vertex) { return true; });
}

std::optional<int> ball_distance(const CayleyBall& b, Vertex x, Vertex y) {
  if (x == y) return 0;
  const int limit = 2 * b.radius() - b.layer(x) - b.layer(y);
  if (limit <= 0) return std::nullopt;
  // small dedicated search; callers with many queries use BallSearch directly
  std::vector<int> seen;
  std::vector<Vertex> frontier{x}, next;
  std::vector<Vertex> touched{x};
  std::vector<char> mark(static_cast<std::size_t>(b.size()), 0);
  mark[static_cast<std::size_t>(x)] = 1;
  for (int d = 1; d <= limit; ++d) {
    next.clear();
    for (Vertex u : frontier) {
      for (int s = 0; s < b.degree(); ++s) {
        Vertex v = b.neighbor(u, static_cast<Letter>(s));
        if (v < 0 || mark[static_cast<std::size_t>(v)]) continue;
        if (v == y) return d;
        mark[static_cast<std::size_t>(v)] = 1;
        next.push_back(v);
      }
    }
    if (next.empty()) break;
    frontier.swap(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Slim-triangle estimate

namespace {

std::vector<Vertex> tree_path(const CayleyBall& b, Vertex v) {
  std::vector<Vertex> p;
  for (;;) {
    p.push_back(v);
    if (v == 0) break;
    v = b.parent(v);
  }
  std::reverse(p.begin(), p.end());
  return p;
}

struct TriangleResult {
  int defect = 0;
  bool certified = false;
};

TriangleResult triangle_defect(const CayleyBall& b, BallSearch& bs, Vertex y, Vertex z) {
  TriangleResult res;
  const int N = b.radius();
  const int ly = b.layer(y), lz = b.layer(z);
  const int limit = 2 * N - ly - lz;
  bs.run({y}, limit);
  int dyz = bs.dist(z);
  if (dyz < 0 || ly + lz + dyz > 2 * N) return res;
  // geodesic z -> y by descending the distance field
  std::vector<Vertex> side3{z};
  Vertex cur = z;
  while (cur != y) {
    int dc = bs.dist(cur);
    for (int s = 0; s < b.degree(); ++s) {
      Vertex v = b.neighbor(cur, static_cast<Letter>(s));
      if (v >= 0 && bs.dist(v) == dc - 1) {
        cur = v;
        break;
      }
    }
    side3.push_back(cur);
  }
  std::vector<std::vector<Vertex>> sides{tree_path(b, y), tree_path(b, z), side3};
  int worst = 0;
  for (int k = 0; k < 3; ++k) {
    std::vector<Vertex> targets;
    int maxl = 0;
    for (int o = 0; o < 3; ++o) {
      if (o == k) continue;
      for (Vertex v : sides[static_cast<std::size_t>(o)]) {
        targets.push_back(v);
        maxl = std::max(maxl, b.layer(v));
      }
    }
    int depth = static_cast<int>(sides[static_cast<std::size_t>(k)].size());
    bs.run(targets, depth);
    for (Vertex p : sides[static_cast<std::size_t>(k)]) {
      int d = bs.dist(p);
      if (d < 0 || b.layer(p) + maxl + d > 2 * N) return res;
      worst = std::max(worst, d);
    }
  }
  res.defect = worst;
  res.certified = true;
  return res;
}

}  // namespace

DeltaEstimate estimate_delta(const CayleyBall& b, const DeltaSampling& sample) {
  DeltaEstimate est;
  if (!b.complete()) fail(ErrorKind::Precondition, "estimate_delta needs a complete ball");
  const int m = std::min(sample.triangle_radius, b.radius());
  const Vertex corners = b.layer_begin(m + 1);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (sample.samples <= 0) {
    for (Vertex y = 1; y < corners; ++y)
      for (Vertex z = y + 1; z < corners; ++z) pairs.emplace_back(y, z);
  } else if (corners > 2) {
    std::mt19937_64 rng(sample.seed);
    std::uniform_int_distribution<Vertex> pick(1, corners - 1);
    for (std::int64_t i = 0; i < sample.samples; ++i) {
      Vertex y = pick(rng), z = pick(rng);
      if (y != z) pairs.emplace_back(std::min(y, z), std::max(y, z));
    }
  }
  const int chunks = std::max(1, sample.workers);
  struct Part {
    int delta = 0;
    std::int64_t n = 0, skipped = 0;
  };
  auto parts = parallel_map(static_cast<std::size_t>(chunks), chunks, [&](std::size_t c) {
    Part part;
    BallSearch bs(b);
    for (std::size_t i = c; i < pairs.size(); i += static_cast<std::size_t>(chunks)) {
      auto r = triangle_defect(b, bs, pairs[i].first, pairs[i].second);
      if (!r.certified) {
        ++part.skipped;
        continue;
      }
      ++part.n;
      part.delta = std::max(part.delta, r.defect);
    }
    return part;
  });
  for (const auto& p : parts) {
    est.delta = std::max(est.delta, p.delta);
    est.triangles += p.n;
    est.skipped += p.skipped;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Bestvina-Mess condition

const char* dagger_status_name(DaggerRadius::Status s) {
  switch (s) {
    case DaggerRadius::Status::Bound: return "bound";
    case DaggerRadius::Status::Failure: return "failure";
    case DaggerRadius::Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Shortest outside paths from x to each target inside the free group, whose
// Cayley graph is a tree: non-backtracking walks never revisit a vertex, so
// the depth-first enumeration needs no visited set.
class FreeOutsideSearch {
 public:
  FreeOutsideSearch(int degree, const Word& x, const std::vector<Word>& targets, int R0, int n_max)
      : A_(degree), targets_(targets), R0_(R0), n_max_(n_max), cur_(x),
        match_(targets.size()), best_(targets.size(), -1) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      std::size_t k = 0;
      while (k < cur_.size() && k < targets[t].size() && cur_[k] == targets[t][k]) ++k;
      match_[t] = static_cast<int>(k);
    }
  }

  std::vector<int> run() {
    go(0, -1);
    return best_;
  }

 private:
  int min_dist() const {
    int m = 1 << 30;
    for (std::size_t t = 0; t < targets_.size(); ++t)
      m = std::min(m, static_cast<int>(cur_.size() + targets_[t].size()) - 2 * match_[t]);
    return m;
  }

  void go(int steps, int last) {
    std::vector<int> saved(match_);
    for (int s = 0; s < A_; ++s) {
      if (last >= 0 && s == inv(static_cast<Letter>(last))) continue;
      const bool pop = !cur_.empty() && cur_.back() == inv(static_cast<Letter>(s));
      const int newlen = static_cast<int>(cur_.size()) + (pop ? -1 : 1);
      if (newlen < R0_) continue;
      Letter popped = 0;
      if (pop) {
        popped = cur_.back();
        cur_.pop_back();
        for (auto& m : match_) m = std::min(m, newlen);
      } else {
        const int p = static_cast<int>(cur_.size());
        cur_.push_back(static_cast<Letter>(s));
        for (std::size_t t = 0; t < targets_.size(); ++t)
          if (match_[t] == p && p < static_cast<int>(targets_[t].size()) &&
              targets_[t][static_cast<std::size_t>(p)] == s)
            match_[t] = p + 1;
      }
      const int st = steps + 1;
      for (std::size_t t = 0; t < targets_.size(); ++t)
        if (match_[t] == newlen && static_cast<int>(targets_[t].size()) == newlen &&
            (best_[t] < 0 || st < best_[t]))
          best_[t] = st;
      if (st < n_max_ && st + min_dist() <= n_max_) go(st, s);
      if (pop)
        cur_.push_back(popped);
      else
        cur_.pop_back();
      match_ = saved;
    }
  }

  int A_;
  const std::vector<Word>& targets_;
  int R0_, n_max_;
  Word cur_;
  std::vector<int> match_;
  std::vector<int> best_;
};

// Shortest paths from x to the targets through vertices of layer >= R0,
// searched inside the ball.  Stops early once every target is reached.
std::vector<int> ball_outside_lengths(const CayleyBall& b, Vertex x,
                                      const std::vector<Vertex>& targets, int R0, int n_max) {
  std::vector<int> best(targets.size(), -1);
  if (targets.empty()) return best;
  std::vector<int> dist(static_cast<std::size_t>(b.size()), -1);
  std::vector<int> want(static_cast<std::size_t>(b.size()), -1);
  for (std::size_t t = 0; t < targets.size(); ++t) want[static_cast<std::size_t>(targets[t])] = static_cast<int>(t);
  std::size_t remaining = targets.size();
  std::vector<Vertex> queue{x};
  dist[static_cast<std::size_t>(x)] = 0;
  for (std::size_t head = 0; head < queue.size() && remaining > 0; ++head) {
    Vertex u = queue[head];
    const int du = dist[static_cast<std::size_t>(u)];
    if (du >= n_max) continue;
    for (int s = 0; s < b.degree(); ++s) {
      Vertex v = b.neighbor(u, static_cast<Letter>(s));
      if (v < 0 || dist[static_cast<std::size_t>(v)] >= 0) continue;
      const int lv = b.layer(v);
      if (lv < R0 || du + 1 + (lv - R0) > n_max) continue;
      dist[static_cast<std::size_t>(v)] = du + 1;
      queue.push_back(v);
      int t = want[static_cast<std::size_t>(v)];
      if (t >= 0 && best[static_cast<std::size_t>(t)] < 0) {
        best[static_cast<std::size_t>(t)] = du + 1;
        --remaining;
      }
    }
  }
  return best;
}

}  // namespace

DaggerVerdict check_double_dagger(const CayleyBall& b, int M, int n_max, const DaggerOptions& opt) {
  if (M < 1) fail(ErrorKind::Domain, "M must be at least 1");
  if (n_max < 0) fail(ErrorKind::Domain, "n_max must be nonnegative");
  if (!b.complete()) fail(ErrorKind::Precondition, "check_double_dagger needs a complete ball");
  const int N = b.radius();
  const bool free = b.presentation().wp_strategy() == WpStrategy::FreeGroup;
  DaggerVerdict out;
  out.M = M;
  out.n_max = n_max;
  out.implicit_free = free;
  int lo = std::max(1, opt.r0_min);
  int hi = opt.r0_max < 0 ? N - 1 : opt.r0_max;
  // pairs must be found exactly, and the searched region must leave room
  // above the sphere
  std::vector<int> radii;
  for (int R0 = lo; R0 <= hi; ++R0) {
    if (R0 > N) break;
    if (!free && (R0 > N - 1 || 2 * R0 + M > 2 * N)) continue;
    radii.push_back(R0);
  }
  if (radii.empty()) fail(ErrorKind::InsufficientRadius, "no testable radius for the dagger condition");

  BallSearch bs(b);
  bool all_bound = true;
  int overall = 0;
  for (int R0 : radii) {
    DaggerRadius dr;
    dr.R0 = R0;
    dr.horizon = free ? n_max : 2 * (N - R0);
    const Vertex s0 = b.layer_begin(R0), s1 = b.layer_begin(R0 + 1);
    std::vector<std::pair<Vertex, std::vector<Vertex>>> work;
    for (Vertex x = s0; x < s1; ++x) {
      bs.run({x}, M);
      std::vector<Vertex> partners;
      for (Vertex y : bs.visited())
        if (y > x && b.layer(y) == R0) partners.push_back(y);
      std::sort(partners.begin(), partners.end());
      if (!partners.empty()) work.emplace_back(x, std::move(partners));
    }
    auto lengths = parallel_map(work.size(), opt.workers, [&](std::size_t i) {
      const auto& [x, partners] = work[i];
      if (free) {
        std::vector<Word> tw;
        for (Vertex y : partners) tw.push_back(b.rep(y));
        return FreeOutsideSearch(b.degree(), b.rep(x), tw, R0, n_max).run();
      }
      return ball_outside_lengths(b, x, partners, R0, n_max);
    });
    bool missing = false;
    for (const auto& ls : lengths) {
      for (int l : ls) {
        ++dr.pairs;
        if (l < 0) {
          missing = true;
          continue;
        }
        dr.n = std::max(dr.n, l);
        if (!free && l - 1 > dr.horizon) dr.exact = false;
      }
    }
    if (missing) {
      dr.status = (free || n_max <= dr.horizon) ? DaggerRadius::Status::Failure
                                                : DaggerRadius::Status::Inconclusive;
      all_bound = false;
    } else {
      overall = std::max(overall, dr.n);
    }
    out.per_radius.push_back(dr);
  }
  if (all_bound) out.n = overall;
  return out;
}

}  // namespace hyp
