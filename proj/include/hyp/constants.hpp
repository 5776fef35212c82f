#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyp/rational.hpp"

namespace hyp {

enum class ConstantMode { Paper, Desk };

// Inputs shared by both modes.  a, k1, k2 are visual-metric parameters; n is
// the double-dagger witness.
struct ConstantInputs {
  int delta = 0;
  int Q = 0;
  Rational lambda = 1;
  Rational epsilon = 0;
  int n = 2;
  Rational a = 2;
  Rational k1 = 1;
  Rational k2 = 1;
  std::optional<int> eta_override;
};

struct ConstantLedger {
  ConstantMode mode = ConstantMode::Desk;
  int delta = 0;
  int C = 0;
  int D = 0;        // Morse constant for (1,0)-quasi-geodesics
  int D_lambda = 0; // Morse constant at the subgroup's (lambda, epsilon)
  int M = 0;
  int eta = 0;
  int n = 2;
  Rational a = 2, k1 = 1, k2 = 1;
  int Q = 0;
  Rational lambda = 1, epsilon = 0;
  int r = 0, K = 0, R = 0;
  std::vector<std::string> warnings;
  // (name, formula) pairs in a fixed order
  std::vector<std::pair<std::string, std::string>> formulas;
};

// ceil(92 * lambda^2 * (epsilon + delta)); monotone in all three arguments.
int morse_constant(const Rational& lambda, const Rational& epsilon, int delta);

// Least integer r with r > 2 log_a(k2 (n-1) / (k1 (1 - 1/a))) + M + 8 delta + eta + C.
int projecting_paths_bound(const ConstantLedger& base);

ConstantLedger derive_paper_constants(const ConstantInputs& in);
ConstantLedger desk_constants(const ConstantInputs& in, int r, int K, int R);

const char* mode_name(ConstantMode m);

}  // namespace hyp
