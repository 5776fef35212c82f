#include "hyp/subgroup.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

namespace hyp {

namespace {

std::vector<std::int64_t> exponent_sums(const Word& w, int rank) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(rank), 0);
  for (Letter x : w) e[x >> 1] += (x & 1) ? -1 : 1;
  return e;
}

// Integer basis of {v : row . v = 0 for every row}.
std::vector<std::vector<std::int64_t>> integer_nullspace(std::vector<std::vector<std::int64_t>> rows, int n) {
  std::vector<std::vector<Rational>> m;
  for (auto& r : rows) {
    std::vector<Rational> q(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)];
    m.push_back(std::move(q));
  }
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (int c = 0; c < n && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][static_cast<std::size_t>(c)] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational piv = m[row][static_cast<std::size_t>(c)];
    for (auto& x : m[row]) x /= piv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][static_cast<std::size_t>(c)] == 0) continue;
      Rational f = m[r][static_cast<std::size_t>(c)];
      for (int k = 0; k < n; ++k) m[r][static_cast<std::size_t>(k)] -= f * m[row][static_cast<std::size_t>(k)];
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<std::vector<std::int64_t>> basis;
  for (int f = 0; f < n; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), f) != pivot_col.end()) continue;
    std::vector<Rational> v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
      v[static_cast<std::size_t>(pivot_col[r])] = -m[r][static_cast<std::size_t>(f)];
    BigInt lcm = 1;
    for (const auto& x : v) {
      BigInt d = boost::multiprecision::denominator(x);
      lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    std::vector<std::int64_t> out;
    for (const auto& x : v) out.push_back(to_int64(boost::multiprecision::numerator(Rational(x * lcm))));
    basis.push_back(std::move(out));
  }
  return basis;
}

std::string word_key(const Word& w) { return std::string(w.begin(), w.end()); }

}  // namespace

SubgroupContext::SubgroupContext(std::shared_ptr<const GroupPresentation> p, std::vector<Word> generators,
                                 int Q, Rational lambda, Rational epsilon, std::int64_t enumeration_budget)
    : pres_(std::move(p)), Q_(Q), lambda_(std::move(lambda)), epsilon_(std::move(epsilon)),
      budget_(enumeration_budget) {
  if (!pres_) fail(ErrorKind::Input, "subgroup context needs a presentation");
  if (Q_ < 0) fail(ErrorKind::Domain, "Q must be non-negative");
  if (lambda_ < 1) fail(ErrorKind::Domain, "lambda must be at least 1");
  if (epsilon_ < 0) fail(ErrorKind::Domain, "epsilon must be non-negative");
  if (budget_ <= 0) fail(ErrorKind::Domain, "enumeration budget must be positive");
  for (auto& g : generators) {
    for (Letter x : g)
      if (x >= pres_->alphabet().size()) fail(ErrorKind::Input, "subgroup generator uses an unknown letter");
    gens_.push_back(free_reduce(g));
    l_ = std::max(l_, static_cast<int>(gens_.back().size()));
  }
  if (pres_->wp_strategy() == WpStrategy::FreeGroup) {
    folded_ = fold(pres_->rank(), gens_);
    core_dist_.assign(static_cast<std::size_t>(folded_->vertex_count()), -1);
    core_dist_[0] = 0;
    std::vector<int> queue{0};
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int x = 0; x < 2 * pres_->rank(); ++x) {
        int t = folded_->target(queue[h], static_cast<Letter>(x));
        if (t < 0 || core_dist_[static_cast<std::size_t>(t)] >= 0) continue;
        core_dist_[static_cast<std::size_t>(t)] = core_dist_[static_cast<std::size_t>(queue[h])] + 1;
        queue.push_back(t);
      }
  }
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : pres_->relators()) rows.push_back(exponent_sums(r, pres_->rank()));
  for (const auto& g : gens_) rows.push_back(exponent_sums(g, pres_->rank()));
  functionals_ = integer_nullspace(rows, pres_->rank());
  rows.resize(pres_->relators().size());
  group_functionals_ = integer_nullspace(rows, pres_->rank());
  y_free_ = compute_y_free();
  for (int L = 0; L < 1024; ++L) enum_len_.push_back(enumeration_length(L));
  elems_.push_back({{}, {}});
  by_invariant_[element_invariant({})].push_back(0);
  level_end_.push_back(1);
}

Word SubgroupContext::evaluate(const YWord& y) const {
  Word out;
  for (Letter t : y) {
    if ((t >> 1) >= rank()) fail(ErrorKind::Input, "Y-word letter out of range");
    const Word& g = gens_[t >> 1];
    if (t & 1) {
      Word gi = inverse(g);
      out.insert(out.end(), gi.begin(), gi.end());
    } else {
      out.insert(out.end(), g.begin(), g.end());
    }
  }
  return free_reduce(out);
}

int SubgroupContext::enumeration_length(int L) const {
  if (L >= 0 && static_cast<std::size_t>(L) < enum_len_.size()) return enum_len_[static_cast<std::size_t>(L)];
  Rational v = lambda_ * L + lambda_ * epsilon_;
  return static_cast<int>(to_int64(ceil_of(v)));
}

int SubgroupContext::required_radius(int L) const {
  const int m = enumeration_length(L);
  int best = 0;
  for (int k = 1; k <= m; ++k)
    for (int j = 0; j <= l_; ++j)
      best = std::max(best, std::min(l_ * (k - 1) + j, L + l_ * (m - k) + l_ - j));
  return std::max(best, L);
}

int SubgroupContext::exact_radius(int N) const {
  int L = -1;
  while (L + 1 <= N && required_radius(L + 1) <= N) ++L;
  return L;
}

const std::vector<SubgroupContext::Element>& SubgroupContext::elements_up_to(int m) const {
  // caller holds mu_
  if (static_cast<int>(level_end_.size()) > m) return elems_;
  std::unordered_set<std::string> seen;
  for (const auto& e : elems_) seen.insert(word_key(e.g));
  while (static_cast<int>(level_end_.size()) <= m) {
    std::size_t begin = level_end_.size() >= 2 ? level_end_[level_end_.size() - 2] : 0;
    std::size_t end = level_end_.back();
    for (std::size_t i = begin; i < end; ++i) {
      for (int t = 0; t < 2 * rank(); ++t) {
        const YWord& y = elems_[i].y;
        if (!y.empty() && y.back() == inv(static_cast<Letter>(t))) continue;
        YWord ny = y;
        ny.push_back(static_cast<Letter>(t));
        const Word& gen = gens_[static_cast<std::size_t>(t >> 1)];
        Word ng = free_reduce(concat(elems_[i].g, (t & 1) ? inverse(gen) : gen));
        if (!seen.insert(word_key(ng)).second) continue;
        if (static_cast<std::int64_t>(elems_.size()) >= budget_)
          fail(ErrorKind::BudgetExhausted, "subgroup element enumeration exceeded its budget");
        by_invariant_[element_invariant(ng)].push_back(elems_.size());
        elems_.push_back({std::move(ny), std::move(ng)});
      }
    }
    level_end_.push_back(elems_.size());
  }
  return elems_;
}

std::optional<int> SubgroupContext::free_distance(const Word& w) const {
  if (!folded_) return std::nullopt;
  Word r = free_reduce(w);
  int v = folded_->root();
  std::size_t i = 0;
  for (; i < r.size(); ++i) {
    int t = folded_->target(v, r[i]);
    if (t < 0) break;
    v = t;
  }
  return core_dist_[static_cast<std::size_t>(v)] + static_cast<int>(r.size() - i);
}

bool SubgroupContext::contains(const Word& w) const {
  if (folded_) return folded_member(*folded_, w);
  return witness(w).has_value();
}

std::optional<YWord> SubgroupContext::witness(const Word& w) const {
  if (folded_) return folded_witness(*folded_, w);
  Word r = pres_->wp_strategy() == WpStrategy::FreeGroup ? free_reduce(w) : pres_->dehn_reduce(w);
  if (r.empty()) return YWord{};
  const int m = enumeration_length(static_cast<int>(r.size()));
  std::lock_guard<std::mutex> lk(mu_);
  const auto& all = elements_up_to(m);
  const std::size_t end = level_end_[static_cast<std::size_t>(m)];
  auto bucket = by_invariant_.find(element_invariant(r));
  if (bucket == by_invariant_.end()) return std::nullopt;
  for (std::size_t i : bucket->second) {
    if (i >= end) break;
    if (all[i].g == r) return all[i].y;
    if (pres_->is_identity(concat(r, inverse(all[i].g)))) return all[i].y;
  }
  if (folded_) fail(ErrorKind::StrategyNotVerified,
                    "member has no Y-word within the lambda/epsilon bound; constants are wrong");
  return std::nullopt;
}

bool SubgroupContext::compute_y_free() const {
  if (gens_.empty()) return true;
  if (pres_->wp_strategy() == WpStrategy::FreeGroup)
    return folded_->subgroup_rank() == static_cast<std::int64_t>(gens_.size());
  if (gens_.size() != 1 || pres_->is_identity(gens_[0])) return false;
  for (const auto& r : pres_->relators()) {
    Word c = cyclic_reduce(r);
    const std::size_t n = c.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d) continue;
      if (std::equal(c.begin() + static_cast<std::ptrdiff_t>(d), c.end(), c.begin())) return false;
    }
  }
  return true;
}

std::vector<std::int64_t> SubgroupContext::element_invariant(const Word& w) const {
  return apply_functionals(group_functionals_, w);
}

std::vector<std::int64_t> SubgroupContext::coset_invariant(const Word& w) const {
  return apply_functionals(functionals_, w);
}

std::vector<std::int64_t> SubgroupContext::apply_functionals(const std::vector<std::vector<std::int64_t>>& fs,
                                                             const Word& w) const {
  auto e = exponent_sums(w, pres_->rank());
  std::vector<std::int64_t> out;
  for (const auto& f : fs) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += f[i] * e[i];
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

SubgroupView::SubgroupView(std::shared_ptr<const SubgroupContext> ctx, const CayleyBall& b)
    : ctx_(std::move(ctx)), b_(b), height_cache_(static_cast<std::size_t>(b.size())) {
  if (!b_.complete()) fail(ErrorKind::Precondition, "subgroup view needs a complete ball");
  if (&b_.presentation() != &ctx_->presentation() && b_.presentation().digest() != ctx_->presentation().digest())
    fail(ErrorKind::Input, "ball and subgroup use different presentations");
  for (auto& h : height_cache_) h.store(-1, std::memory_order_relaxed);
  L_ = ctx_->exact_radius(b_.radius());
  upper_.assign(static_cast<std::size_t>(b_.size()), -1);
  if (L_ < 0) return;

  // Breadth-first search over H-elements by Y-length.  A node at Y-depth k
  // is kept only while it can still return to B_L in the remaining steps.
  const int m = ctx_->enumeration_length(L_);
  const int l = ctx_->l();
  std::unordered_map<Vertex, std::pair<Vertex, Letter>> parent;
  parent.emplace(0, std::make_pair(kNone, Letter{0}));
  std::vector<Vertex> frontier{0};
  for (int k = 0; k < m && !frontier.empty(); ++k) {
    std::vector<Vertex> next;
    for (Vertex u : frontier) {
      for (int t = 0; t < 2 * ctx_->rank(); ++t) {
        const Word& g = ctx_->generators()[static_cast<std::size_t>(t >> 1)];
        Vertex v = b_.trace(u, (t & 1) ? inverse(g) : g);
        if (v == kNone || parent.count(v)) continue;
        if (b_.layer(v) > L_ + l * (m - k - 1)) continue;
        parent.emplace(v, std::make_pair(u, static_cast<Letter>(t)));
        next.push_back(v);
        if (static_cast<std::int64_t>(parent.size()) > ctx_->enumeration_budget())
          fail(ErrorKind::BudgetExhausted, "subgroup ball enumeration exceeded its budget");
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto& [v, pr] : parent) {
    if (b_.layer(v) > L_) continue;
    elements_.push_back(v);
  }
  std::sort(elements_.begin(), elements_.end());
  for (Vertex v : elements_) {
    YWord y;
    for (Vertex u = v; u != 0;) {
      auto [p, t] = parent.at(u);
      y.push_back(t);
      u = p;
    }
    std::reverse(y.begin(), y.end());
    witness_.emplace(v, std::move(y));
  }
  BallSearch bs(b_);
  bs.run(elements_, 1 << 30);
  for (Vertex v : bs.visited()) upper_[static_cast<std::size_t>(v)] = bs.dist(v);
}

std::vector<Vertex> SubgroupView::subgroup_ball(int L) const {
  if (L > L_) fail(ErrorKind::InsufficientRadius, "subgroup ball radius " + std::to_string(L) +
                                                      " exceeds the certified radius " + std::to_string(L_));
  std::vector<Vertex> out;
  for (Vertex v : elements_)
    if (b_.layer(v) <= L) out.push_back(v);
  return out;
}

bool SubgroupView::member_vertex(Vertex v) const {
  if (b_.layer(v) > L_) fail(ErrorKind::InsufficientRadius, "membership query beyond the certified radius");
  return witness_.count(v) > 0;
}

YWord SubgroupView::witness_vertex(Vertex v) const {
  auto it = witness_.find(v);
  if (it == witness_.end()) fail(ErrorKind::Precondition, "vertex is not a certified subgroup element");
  return it->second;
}

bool SubgroupView::is_member(const Word& w) const {
  Word r = free_reduce(w);
  if (static_cast<int>(r.size()) <= L_) {
    Vertex v = b_.locate(r);
    if (v != kNone) return member_vertex(v);
  }
  return ctx_->contains(r);
}

std::optional<int> SubgroupView::certified_height(Vertex x) const {
  int U = upper_[static_cast<std::size_t>(x)];
  if (U < 0) return std::nullopt;
  int lx = b_.layer(x);
  if (U <= L_ + 1 - lx && lx + L_ + U <= 2 * b_.radius() + 1) return U;
  return std::nullopt;
}

void SubgroupView::build_buckets() const {
  std::vector<std::vector<std::int64_t>> inv(static_cast<std::size_t>(b_.size()));
  const Vertex end = b_.layer_begin(b_.radius());
  for (Vertex v = 0; v < end; ++v) {
    if (v == 0) {
      inv[0] = ctx_->coset_invariant({});
    } else {
      inv[static_cast<std::size_t>(v)] = inv[static_cast<std::size_t>(b_.parent(v))];
      auto d = ctx_->coset_invariant(Word{b_.parent_letter(v)});
      for (std::size_t i = 0; i < d.size(); ++i) inv[static_cast<std::size_t>(v)][i] += d[i];
    }
    buckets_[inv[static_cast<std::size_t>(v)]].push_back(v);
  }
}

int SubgroupView::coset_search(Vertex x, int upper) const {
  std::call_once(buckets_once_, [this] { build_buckets(); });
  fallbacks_.fetch_add(1);
  Word rx = b_.rep(x);
  auto it = buckets_.find(ctx_->coset_invariant(rx));
  if (it == buckets_.end()) return upper;
  for (Vertex y : it->second) {
    int j = b_.layer(y);
    if (j >= upper) break;
    if (auto c = certified_height(y); c && *c != j) continue;
    if (ctx_->contains(concat(rx, inverse(b_.rep(y))))) return j;
  }
  return upper;
}

int SubgroupView::height(Vertex x) const {
  auto& slot = height_cache_[static_cast<std::size_t>(x)];
  int cached = slot.load(std::memory_order_relaxed);
  if (cached >= 0) return cached;
  int h;
  if (auto c = certified_height(x)) {
    h = *c;
  } else if (auto f = ctx_->free_distance(b_.rep(x))) {
    h = *f;
  } else {
    int U = upper_[static_cast<std::size_t>(x)];
    if (U < 0) fail(ErrorKind::InsufficientRadius, "no subgroup element is certified inside the ball");
    h = coset_search(x, U);
  }
  slot.store(h, std::memory_order_relaxed);
  return h;
}

int SubgroupView::distance_to_coset(Vertex g, Vertex x) const {
  Vertex v = b_.locate(concat(inverse(b_.rep(g)), b_.rep(x)));
  if (v == kNone) fail(ErrorKind::InsufficientRadius, "g^-1 x lies outside the ball");
  return height(v);
}

bool SubgroupView::same_coset(Vertex x, Vertex y) const {
  if (x == y) return true;
  Word rx = b_.rep(x), ry = b_.rep(y);
  if (ctx_->coset_invariant(rx) != ctx_->coset_invariant(ry)) return false;
  auto cx = certified_height(x), cy = certified_height(y);
  if (cx && cy && *cx != *cy) return false;
  return is_member(concat(rx, inverse(ry)));
}

std::optional<YWord> SubgroupView::coset_witness(Vertex x, Vertex y) const {
  Word w = free_reduce(concat(b_.rep(x), inverse(b_.rep(y))));
  if (static_cast<int>(w.size()) <= L_) {
    Vertex v = b_.locate(w);
    if (v != kNone) {
      auto it = witness_.find(v);
      if (it == witness_.end()) return std::nullopt;
      return it->second;
    }
  }
  return ctx_->witness(w);
}

std::vector<Vertex> subgroup_ball(const SubgroupView& v, int L) { return v.subgroup_ball(L); }
bool is_member(const SubgroupView& v, const Word& w) { return v.is_member(w); }
int distance_to_subgroup(const SubgroupView& v, Vertex x) { return v.height(x); }
int distance_to_coset(const SubgroupView& v, Vertex g, Vertex x) { return v.distance_to_coset(g, x); }

}  // namespace hyp
