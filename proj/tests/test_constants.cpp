#include <cmath>
#include <random>

#include "doctest.h"
#include "hyp/constants.hpp"
#include "hyp/error.hpp"

using namespace hyp;

TEST_CASE("paper-mode example") {
  ConstantInputs in;
  in.eta_override = 0;
  auto g = derive_paper_constants(in);
  CHECK(g.C == 0);
  CHECK(g.M == 3);
  CHECK(g.r == 6);
  CHECK(g.K == 6);
  CHECK(g.R == 8);  // least integer > 4*delta + Q + max(r + 4*delta + 1, K) = 7
  CHECK(g.mode == ConstantMode::Paper);
  // the three quoted inequalities, evaluated directly in floating point
  double bound = 2 * std::log(1.0 / (1 - 0.5)) / std::log(2.0) + g.M + 8 * g.delta + g.eta + g.C;
  CHECK(g.r > bound);
  CHECK(g.K >= g.r + g.Q + g.delta + g.C);
  CHECK(g.R > 4 * g.delta + g.Q + std::max(g.r + 4 * g.delta + 1, g.K));
}

TEST_CASE("desk-mode examples") {
  ConstantInputs in;
  auto d1 = desk_constants(in, 1, 2, 3);
  CHECK(d1.mode == ConstantMode::Desk);
  CHECK_FALSE(d1.warnings.empty());
  CHECK_THROWS_AS(desk_constants(in, 3, 2, 5), Error);
  try {
    desk_constants(in, 3, 2, 5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  in.eta_override = 0;
  CHECK(desk_constants(in, 6, 6, 12).warnings.empty());
  // with the derived eta (Q + 4 delta + D = 0 here) the same holds
  ConstantInputs plain;
  CHECK(desk_constants(plain, 6, 6, 12).warnings.empty());
  CHECK(desk_constants(plain, 6, 6, 8).warnings.empty());
  CHECK(desk_constants(plain, 6, 6, 7).warnings.size() == 1);
}

TEST_CASE("domain errors") {
  ConstantInputs in;
  in.n = 1;
  CHECK_THROWS_AS(derive_paper_constants(in), Error);
  in = {};
  in.a = 1;
  CHECK_THROWS_AS(derive_paper_constants(in), Error);
  in = {};
  in.k1 = 2;
  CHECK_THROWS_AS(derive_paper_constants(in), Error);
}

TEST_CASE("morse constant formula") {
  CHECK(morse_constant(1, 0, 0) == 0);
  CHECK(morse_constant(1, 0, 1) == 92);
  CHECK(morse_constant(Rational(3, 2), Rational(1, 3), 0) == 69);  // 92 * 9/4 * 1/3
  CHECK(morse_constant(2, 1, 1) == 736);
}

TEST_CASE("monotonicity and self-consistency over a parameter sweep") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    ConstantInputs in;
    in.delta = static_cast<int>(rng() % 4);
    in.Q = static_cast<int>(rng() % 5);
    in.lambda = Rational(1) + Rational(static_cast<int>(rng() % 4), 2);
    in.epsilon = Rational(static_cast<int>(rng() % 5), 3);
    in.n = 2 + static_cast<int>(rng() % 5);
    in.a = Rational(2) + Rational(static_cast<int>(rng() % 6), 4);
    in.k1 = Rational(1, 1 + static_cast<int>(rng() % 3));
    in.k2 = in.k1 * (1 + static_cast<int>(rng() % 3));
    if (rng() % 2) in.eta_override = static_cast<int>(rng() % 6);
    auto g = derive_paper_constants(in);
    auto d = desk_constants(in, g.r, g.K, g.R);
    CHECK(d.warnings.empty());
    CHECK(g.r <= g.K);
    CHECK(g.K <= g.R);
    // floating-point cross-check of the log bound, away from ties
    double X = static_cast<double>(in.k2 * (in.n - 1) / (in.k1 * (1 - Rational(1) / in.a)));
    double b = 2 * std::log(X) / std::log(static_cast<double>(in.a)) + g.M + 8 * g.delta + g.eta + g.C;
    if (std::abs(b - std::round(b)) > 1e-9) CHECK(g.r == std::max(static_cast<int>(std::floor(b)) + 1, g.eta + 1));

    for (int which = 0; which < 3; ++which) {
      ConstantInputs up = in;
      if (which == 0) up.delta += 1;
      if (which == 1) up.Q += 1;
      if (which == 2) up.eta_override = (in.eta_override ? *in.eta_override : g.eta) + 1;
      auto h = derive_paper_constants(up);
      CHECK(h.r >= g.r);
      CHECK(h.K >= g.K);
      CHECK(h.R >= g.R);
    }
  }
}
