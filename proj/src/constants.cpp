#include "hyp/constants.hpp"

#include <algorithm>

#include "hyp/error.hpp"

namespace hyp {

namespace {

Rational power(const Rational& a, int t) {
  Rational out = 1;
  for (int i = 0; i < std::abs(t); ++i) out *= a;
  return t >= 0 ? out : Rational(1) / out;
}

void validate(const ConstantInputs& in) {
  if (in.delta < 0) fail(ErrorKind::Domain, "delta must be non-negative");
  if (in.Q < 0) fail(ErrorKind::Domain, "Q must be non-negative");
  if (in.lambda < 1) fail(ErrorKind::Domain, "lambda must be at least 1");
  if (in.epsilon < 0) fail(ErrorKind::Domain, "epsilon must be non-negative");
  if (in.n < 2) fail(ErrorKind::Domain, "n must be at least 2");
  if (in.a <= 1) fail(ErrorKind::Domain, "visual parameter a must exceed 1");
  if (in.k1 <= 0 || in.k2 <= 0) fail(ErrorKind::Domain, "k1 and k2 must be positive");
  if (in.k1 > in.k2) fail(ErrorKind::Domain, "k1 must not exceed k2");
  if (in.eta_override && *in.eta_override < 0) fail(ErrorKind::Domain, "eta must be non-negative");
}

ConstantLedger base_ledger(const ConstantInputs& in) {
  validate(in);
  ConstantLedger g;
  g.delta = in.delta;
  g.C = 3 * in.delta;
  g.M = 6 * g.C + 2 * in.delta + 3;
  g.D = morse_constant(1, 0, in.delta);
  g.D_lambda = morse_constant(in.lambda, in.epsilon, in.delta);
  g.eta = in.eta_override ? *in.eta_override : in.Q + 4 * in.delta + g.D;
  g.n = in.n;
  g.a = in.a;
  g.k1 = in.k1;
  g.k2 = in.k2;
  g.Q = in.Q;
  g.lambda = in.lambda;
  g.epsilon = in.epsilon;
  g.formulas = {
      {"C", "3*delta"},
      {"M", "6*C + 2*delta + 3"},
      {"D", "ceil(92*lambda^2*(epsilon + delta)) at (lambda, epsilon) = (1, 0)"},
      {"D_lambda", "ceil(92*lambda^2*(epsilon + delta))"},
      {"eta", in.eta_override ? "user override" : "Q + 4*delta + D"},
      {"r_min", "least integer > 2*log_a(k2*(n-1)/(k1*(1-1/a))) + M + 8*delta + eta + C, and > eta"},
      {"K_min", "least integer >= r + Q + delta + C"},
      {"R_min", "least integer > 4*delta + Q + max(r + 4*delta + 1, K)"},
  };
  return g;
}

int K_bound(const ConstantLedger& g, int r) { return r + g.Q + g.delta + g.C; }
int R_bound(const ConstantLedger& g, int r, int K) {
  return 4 * g.delta + g.Q + std::max(r + 4 * g.delta + 1, K) + 1;
}

}  // namespace

int morse_constant(const Rational& lambda, const Rational& epsilon, int delta) {
  return static_cast<int>(to_int64(ceil_of(Rational(92) * lambda * lambda * (epsilon + delta))));
}

int projecting_paths_bound(const ConstantLedger& g) {
  // r > 2 log_a X + B with B an integer  <=>  a^(r-B) > X^2
  Rational X = g.k2 * (g.n - 1) / (g.k1 * (Rational(1) - Rational(1) / g.a));
  Rational X2 = X * X;
  const int B = g.M + 8 * g.delta + g.eta + g.C;
  int t = 0;
  while (power(g.a, t) <= X2) ++t;
  while (power(g.a, t - 1) > X2) --t;
  return std::max(B + t, g.eta + 1);
}

ConstantLedger derive_paper_constants(const ConstantInputs& in) {
  ConstantLedger g = base_ledger(in);
  g.mode = ConstantMode::Paper;
  g.r = projecting_paths_bound(g);
  g.K = K_bound(g, g.r);
  g.R = R_bound(g, g.r, g.K);
  return g;
}

ConstantLedger desk_constants(const ConstantInputs& in, int r, int K, int R) {
  ConstantLedger g = base_ledger(in);
  if (r < 0 || r > K || K > R)
    fail(ErrorKind::Domain, "constants must satisfy 0 <= r <= K <= R (got r=" + std::to_string(r) +
                                ", K=" + std::to_string(K) + ", R=" + std::to_string(R) + ")");
  g.mode = ConstantMode::Desk;
  g.r = r;
  g.K = K;
  g.R = R;
  int rmin = projecting_paths_bound(g);
  if (r < rmin) g.warnings.push_back("r=" + std::to_string(r) + " is below the projecting-paths bound " + std::to_string(rmin));
  if (r <= g.eta) g.warnings.push_back("r=" + std::to_string(r) + " does not exceed eta=" + std::to_string(g.eta));
  if (K < K_bound(g, r))
    g.warnings.push_back("K=" + std::to_string(K) + " is below r + Q + delta + C = " + std::to_string(K_bound(g, r)));
  if (R < R_bound(g, r, K))
    g.warnings.push_back("R=" + std::to_string(R) + " does not exceed 4*delta + Q + max(r + 4*delta + 1, K) = " +
                         std::to_string(R_bound(g, r, K) - 1));
  return g;
}

const char* mode_name(ConstantMode m) { return m == ConstantMode::Paper ? "paper" : "desk"; }

}  // namespace hyp
