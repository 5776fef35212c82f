#include <deque>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyp/presentation.hpp"

using namespace hyp;

namespace {

// Bounded search of the relator rewriting graph: free cancellation plus
// replacement of u by v whenever u v^-1 is a cyclic conjugate of a relator or
// its inverse.  Returns 1 if the empty word is reached, 0 if the whole bounded
// component was explored without reaching it, -1 if the state cap was hit.
int rewriting_oracle(const GroupPresentation& p, const Word& w, std::size_t max_len,
                     std::size_t cap) {
  std::vector<Word> conj;
  for (const auto& r : p.relators()) {
    for (const Word& base : {r, inverse(r)}) {
      for (std::size_t k = 0; k < base.size(); ++k) {
        Word c(base.begin() + static_cast<long>(k), base.end());
        c.insert(c.end(), base.begin(), base.begin() + static_cast<long>(k));
        conj.push_back(c);
      }
    }
  }
  std::set<Word> seen{w};
  std::deque<Word> q{w};
  while (!q.empty()) {
    Word cur = q.front();
    q.pop_front();
    if (cur.empty()) return 1;
    auto push = [&](Word n) {
      if (n.size() > max_len || seen.count(n)) return;
      seen.insert(n);
      q.push_back(std::move(n));
    };
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i + 1] == inv(cur[i])) {
        Word n(cur.begin(), cur.begin() + static_cast<long>(i));
        n.insert(n.end(), cur.begin() + static_cast<long>(i) + 2, cur.end());
        push(std::move(n));
      }
    }
    // replace cur[i, i+len) = c[0, len) by inverse(c[len, L))
    for (const auto& c : conj) {
      for (std::size_t len = 0; len <= c.size(); ++len) {
        Word u(c.begin(), c.begin() + static_cast<long>(len));
        Word v = inverse(Word(c.begin() + static_cast<long>(len), c.end()));
        for (std::size_t i = 0; i + len <= cur.size(); ++i) {
          if (!std::equal(u.begin(), u.end(), cur.begin() + static_cast<long>(i))) continue;
          if (cur.size() - len + v.size() > max_len) continue;
          Word n(cur.begin(), cur.begin() + static_cast<long>(i));
          n.insert(n.end(), v.begin(), v.end());
          n.insert(n.end(), cur.begin() + static_cast<long>(i + len), cur.end());
          push(std::move(n));
        }
      }
    }
    if (seen.size() > cap) return -1;
  }
  return 0;
}

// Every common prefix of two different cyclic words read off the relators.
int brute_max_piece(const std::vector<Word>& rels) {
  std::vector<Word> cyc;
  for (const auto& r : rels)
    for (const Word& base : {r, inverse(r)})
      for (std::size_t k = 0; k < base.size(); ++k) {
        Word c(base.begin() + static_cast<long>(k), base.end());
        c.insert(c.end(), base.begin(), base.begin() + static_cast<long>(k));
        cyc.push_back(c);
      }
  int best = 0;
  for (std::size_t i = 0; i < cyc.size(); ++i)
    for (std::size_t j = 0; j < cyc.size(); ++j) {
      if (cyc[i] == cyc[j]) continue;
      int k = 0;
      while (k < static_cast<int>(cyc[i].size()) && k < static_cast<int>(cyc[j].size()) &&
             cyc[i][static_cast<std::size_t>(k)] == cyc[j][static_cast<std::size_t>(k)])
        ++k;
      best = std::max(best, k);
    }
  return best;
}

}  // namespace

TEST_CASE("parse_presentation examples") {
  auto f = parse_presentation("generators a b\nrelators (none)\n");
  CHECK(f.rank() == 2);
  CHECK(f.relators().empty());
  CHECK(f.wp_strategy() == WpStrategy::FreeGroup);

  auto s = parse_presentation("[group]\ngenerators = a b c d\nrelators = abABcdCD\n");
  REQUIRE(s.relators().size() == 1);
  CHECK(s.relators()[0].size() == 8);
  CHECK(s.wp_strategy() == WpStrategy::DehnSmallCancellation);

  try {
    parse_presentation("generators = a\nrelators = aa, aA\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
  }
  CHECK_THROWS_AS(parse_presentation("generators = a b\nrelators = abx\n"), Error);
  CHECK_THROWS_AS(parse_presentation("[group\n"), Error);
  try {
    parse_presentation("generators = a b\n\nrelators = ab, \n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_input sections") {
  auto in = parse_input(
      "# test\n[group]\nname = S\ngenerators = a b c d\nrelators = abABcdCD\n"
      "[subgroup]\ngenerators = a, bB\n[constants]\nQ = 0\nlambda = 1\n"
      "[candidate]\nedge_generators = a\n[candidate]\nedge_generators = aa\n");
  CHECK(in.presentation->name() == "S");
  CHECK(in.subgroup_generators.size() == 2);
  CHECK(in.constants.at("lambda") == "1");
  CHECK(in.candidates.size() == 2);
}

TEST_CASE("free_reduce examples and properties") {
  auto f = fx::free2();
  const auto& A = f->alphabet();
  CHECK(free_reduce(A.parse("aA")).empty());
  CHECK(free_reduce(A.parse("abBA")).empty());
  CHECK(A.format(free_reduce(A.parse("abAB"))) == "abAB");

  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    Word w;
    int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) w.push_back(static_cast<Letter>(rng() % 4));
    Word r = free_reduce(w);
    CHECK(is_freely_reduced(r));
    CHECK(free_reduce(r) == r);
    CHECK(r.size() <= w.size());
  }
}

TEST_CASE("small cancellation certificate") {
  auto s = fx::surface2();
  auto c = certify_small_cancellation(s->relators());
  CHECK(c.max_piece_length == 1);
  CHECK(c.min_relator_length == 8);
  CHECK(c.accepted());
  CHECK(brute_max_piece(s->relators()) == 1);

  auto n = fx::nonorientable4();
  auto cn = certify_small_cancellation(n->relators());
  CHECK(cn.max_piece_length == brute_max_piece(n->relators()));
  CHECK(cn.max_piece_length == 1);
  CHECK(cn.accepted());

  auto bad = parse_presentation("generators = a b\nrelators = abab\n");
  CHECK(bad.certificate().max_piece_length >= 2);
  CHECK_FALSE(bad.certificate().accepted());
  CHECK_FALSE(bad.verified());
  try {
    bad.dehn_reduce(bad.alphabet().parse("ab"));
    FAIL("expected strategy-not-verified");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StrategyNotVerified);
  }
}

TEST_CASE("dehn_reduce and is_identity examples") {
  auto s = fx::surface2();
  auto f = fx::free2();
  CHECK(s->dehn_reduce(fx::w(*s, "abABcdCD")).empty());
  CHECK(s->alphabet().format(s->dehn_reduce(fx::w(*s, "a"))) == "a");
  CHECK(f->alphabet().format(f->dehn_reduce(fx::w(*f, "baB"))) == "baB");
  CHECK(f->is_identity(fx::w(*f, "aA")));
  CHECK_FALSE(s->is_identity(fx::w(*s, "ab")));
  CHECK(s->is_identity(fx::w(*s, "cdCDabAB")));
  CHECK(s->is_identity(fx::w(*s, "dcDCbaBA")));
  // more than half a relator is replaced by the shorter complement
  CHECK(s->alphabet().format(s->dehn_reduce(fx::w(*s, "abABc"))) == "dcD");
}

TEST_CASE("is_identity agrees with the rewriting oracle") {
  for (auto p : {fx::surface2(), fx::nonorientable4()}) {
    std::mt19937_64 rng(11);
    int inconclusive = 0, trivial = 0;
    std::vector<Word> words;
    // all reduced words of length <= 3
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= 3; ++len) {
      std::vector<Word> next;
      for (const auto& u : layer)
        for (Letter x = 0; x < 8; ++x)
          if (u.empty() || u.back() != inv(x)) {
            Word v = u;
            v.push_back(x);
            next.push_back(v);
          }
      words.insert(words.end(), next.begin(), next.end());
      layer = next;
    }
    // conjugates and products of relators, with random noise
    for (int t = 0; t < 150; ++t) {
      const Word& r = p->relators()[0];
      std::size_t k = rng() % r.size();
      Word c(r.begin() + static_cast<long>(k), r.end());
      c.insert(c.end(), r.begin(), r.begin() + static_cast<long>(k));
      if (rng() % 2) c = inverse(c);
      if (rng() % 3 == 0) {
        Letter x = static_cast<Letter>(rng() % 8);
        c.insert(c.begin() + static_cast<long>(rng() % (c.size() + 1)), x);
      }
      words.push_back(c);
    }
    for (int t = 0; t < 150; ++t) {
      Word w;
      int n = 6 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) w.push_back(static_cast<Letter>(rng() % 8));
      words.push_back(w);
    }
    for (const auto& w : words) {
      int o = rewriting_oracle(*p, w, std::max<std::size_t>(w.size(), 8) + 1, 20000);
      if (o < 0) {
        ++inconclusive;
        continue;
      }
      if (o == 1) ++trivial;
      CHECK_MESSAGE(p->is_identity(w) == (o == 1), p->alphabet().format(w));
    }
    CHECK(trivial > 50);
    CHECK(inconclusive < static_cast<int>(words.size()) / 10);
  }
}

TEST_CASE("word equality is an equivalence relation on short words") {
  auto s = fx::surface2();
  std::mt19937_64 rng(3);
  auto rw = [&] {
    Word w;
    int n = static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) w.push_back(static_cast<Letter>(rng() % 8));
    return w;
  };
  const Word& r = s->relators()[0];
  for (int t = 0; t < 500; ++t) {
    Word u = rw(), v = rw();
    CHECK(s->equal(u, u));
    CHECK(s->equal(u, v) == s->equal(v, u));
    // u ~ u·r ~ r'·u for relator conjugates r'
    Word ur = concat(u, r);
    Word ru = concat(Word(r.begin() + 3, r.end()), Word(r.begin(), r.begin() + 3));
    ru = concat(ru, u);
    CHECK(s->equal(u, ur));
    CHECK(s->equal(ur, ru));
    CHECK(s->equal(u, ru));
  }
}
