#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyp/constants.hpp"
#include "hyp/ends.hpp"
#include "hyp/subgroup.hpp"

namespace hyp {

// ---------------------------------------------------------------------------
// Commensurator membership

enum class CommStatus { Member, NonMember, Unknown };
const char* comm_status_name(CommStatus s);

struct CommBudget {
  int max_radius = 10;              // Y-radius of the H-balls used for coset counts
  std::int64_t max_tests = 200'000; // membership tests
  int evidence_radius = 6;          // G-radius for the intersection sample
};

struct CommVerdict {
  Word g;
  CommStatus verdict = CommStatus::Unknown;
  // in-subgroup, free-pullback, cyclic-centraliser, coset-stabilisation or budget
  std::string method;
  // Nontrivial elements of H ∩ H^g in the sampled G-ball (H^g = g^-1 H g).
  std::vector<Word> intersection;
  int evidence_radius = 0;
  // Distinct cosets of H ∩ H^g met by the H-balls (resp. H^g-balls) of Y-radius 0, 1, ...
  std::vector<int> trace_H, trace_Hg;
  std::optional<std::int64_t> index_H, index_Hg;
  std::int64_t budget_spent = 0;
};

CommVerdict commensurator_member(const SubgroupView& v, const Word& g, const CommBudget& budget = {});

// ---------------------------------------------------------------------------
// Crossing witnesses

// Side of a point above C_K: the digraph component reached by descending
// along height-decreasing edges to C_K and locating that point's coset in the
// minimal cover.  Memoised per ball vertex.
class SideMap {
 public:
  SideMap(const SubgroupView& v, const ConstantLedger& g);
  const ComponentModel& model() const { return model_; }
  const SubgroupView& view() const { return *v_; }
  const ConstantLedger& ledger() const { return g_; }
  // Digraph component, or -1 when the height is below K or the descent
  // leaves the ball.
  int side(Vertex x);

 private:
  const SubgroupView* v_;
  ConstantLedger g_;
  ComponentModel model_;
  std::vector<int> memo_;  // -2 not computed
  std::map<std::vector<std::int64_t>, std::vector<Vertex>> onK_;  // cover points on C_K by coset invariant
  int side_on_CK(Vertex z);
};

struct CrossingWitness {
  Word x;
  int d_H = 0;
  int d_gH = 0;
};

// Patterns in order U∩gU, U∩gU*, U*∩gU, U*∩gU*.
struct CrossingCertificate {
  Word g;
  std::vector<int> U;      // digraph components forming U
  int r_g = 0;             // r + pad*|g|
  int K = 0;
  int delta = 0;
  int threshold_H = 0;     // d(x,H) must exceed this
  int threshold_gH = 0;    // d(x,gH) must exceed this
  std::array<std::optional<CrossingWitness>, 4> witnesses;
  std::int64_t scanned = 0;
  std::int64_t skipped = 0;  // g^-1 x outside the ball or side undetermined
  bool complete() const;
  int found() const;
};

struct CrossingBudget {
  std::int64_t max_vertices = 5'000'000;
  int pad = 1;
};

const char* pattern_name(int i);

// Scans ball vertices x in increasing layer order with g^-1 x also in the
// ball.  The certificate is complete when all four patterns have witnesses.
CrossingCertificate crossing_witness(SideMap& sides, const std::vector<int>& U, const Word& g,
                                     const CrossingBudget& budget = {});

struct CrossingsOptions {
  int max_g_layer = 2;
  std::int64_t max_elements = 1'000;
  CrossingBudget crossing;
  CommBudget comm;
};

struct ClassProgress {
  std::vector<int> U;
  std::optional<CrossingCertificate> certificate;  // complete
  std::optional<CrossingCertificate> best;         // most patterns found so far
};

struct CrossingsReport {
  enum class Outcome { AllCrossed, NoAlmostInvariantSet, BudgetExhausted } outcome = Outcome::BudgetExhausted;
  int e_pair = 0;
  std::vector<ClassProgress> classes;
  std::int64_t elements_tried = 0;
  std::int64_t skipped_member = 0;
  std::int64_t skipped_unknown = 0;
};
const char* crossings_outcome_name(CrossingsReport::Outcome o);

// Nontrivial unions of orbit classes up to complement: every subset
// containing the first orbit except the whole set.
std::vector<std::vector<int>> almost_invariant_classes(const std::vector<int>& orbits);

CrossingsReport crossings_search(const SubgroupView& v, const ConstantLedger& g, const CrossingsOptions& opt = {});

// ---------------------------------------------------------------------------
// Splittings

// Candidate edge group H' given by generators with its own constants.
struct Candidate {
  std::vector<Word> generators;
  Rational lambda = 1;
  Rational epsilon = 0;
};

struct CandidateVerdict {
  Tri commensurable = Tri::Unknown;
  std::vector<CommVerdict> candidate_in_comm_H;  // each candidate generator against H
  std::vector<CommVerdict> H_in_comm_candidate;  // each H generator against the candidate
};

CandidateVerdict verify_candidate_splitting(const SubgroupView& v, const Candidate& c, const CommBudget& budget = {});

enum class SplitMode { FiniteFiltered, Lonely, NotLonely };
const char* split_mode_name(SplitMode m);

struct SplitOptions {
  SplitMode mode = SplitMode::Lonely;
  std::vector<Candidate> candidates;
  int slices = 64;  // round-robin turns per track
  CrossingsOptions crossings;
  CommBudget comm;
  FilteredBudget filtered;
  // NotLonely preprocessing inputs: an element of Comm(H) - H, or generators
  // of a finite-index subgroup of H.
  std::optional<Word> commensurating_element;
  std::vector<Word> finite_index_subgroup;
};

struct SplitReport {
  enum class Outcome { Associated, NotAssociated, NoAlmostInvariantSet, BudgetExhausted } outcome =
      Outcome::BudgetExhausted;
  SplitMode mode = SplitMode::Lonely;
  std::string concluded_by;  // "A", "B" or empty
  std::optional<int> candidate;  // index of the verified candidate
  std::vector<CandidateVerdict> candidate_verdicts;
  std::optional<CrossingsReport> crossings;
  std::vector<Word> track_b_subgroup;  // generators of the subgroup searched by track B
  int slices_used = 0;
  std::vector<std::string> notes;
};
const char* split_outcome_name(SplitReport::Outcome o);

SplitReport split_decision(const SubgroupView& v, const ConstantLedger& g, const SplitOptions& opt);

}  // namespace hyp
