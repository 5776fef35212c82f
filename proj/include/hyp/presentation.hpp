#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyp/error.hpp"

namespace hyp {

// Letter 2*i is generator i, letter 2*i+1 is its inverse.  The numeric order
// a < A < b < B < ... is the shortlex letter order used everywhere.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline Letter inv(Letter x) { return static_cast<Letter>(x ^ 1u); }
inline Letter gen_letter(int g) { return static_cast<Letter>(2 * g); }

Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
bool is_freely_reduced(const Word& w);
bool shortlex_less(const Word& u, const Word& v);

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<char> gens);

  int rank() const { return static_cast<int>(gens_.size()); }
  int size() const { return 2 * rank(); }
  char symbol(Letter x) const;
  const std::vector<char>& generators() const { return gens_; }

  Word parse(const std::string& text) const;
  std::string format(const Word& w) const;

 private:
  std::vector<char> gens_;
};

enum class WpStrategy { FreeGroup, DehnSmallCancellation };

struct SmallCancellationCertificate {
  int max_piece_length = 0;
  int min_relator_length = 0;
  // ratio = max_piece_length / min_relator_length, kept unreduced
  bool accepted() const { return 6 * max_piece_length < min_relator_length; }
};

class DehnTrie;

class GroupPresentation {
 public:
  GroupPresentation(std::string name, Alphabet alphabet,
                    std::vector<Word> relators);

  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Word>& relators() const { return relators_; }
  int rank() const { return alphabet_.rank(); }
  WpStrategy wp_strategy() const { return strategy_; }
  bool verified() const { return verified_; }
  const SmallCancellationCertificate& certificate() const { return cert_; }

  // All cyclic conjugates of relators and of their inverses, deduplicated.
  const std::vector<Word>& symmetrized_relators() const { return sym_; }

  Word dehn_reduce(const Word& w) const;
  bool is_identity(const Word& w) const;
  bool equal(const Word& u, const Word& v) const;

  std::string digest() const;

 private:
  std::string name_;
  Alphabet alphabet_;
  std::vector<Word> relators_;
  std::vector<Word> sym_;
  WpStrategy strategy_ = WpStrategy::FreeGroup;
  SmallCancellationCertificate cert_;
  bool verified_ = true;
  std::shared_ptr<const DehnTrie> trie_;
};

std::vector<Word> symmetrize(const std::vector<Word>& relators);
SmallCancellationCertificate certify_small_cancellation(
    const std::vector<Word>& relators);

Word dehn_reduce(const Word& w, const GroupPresentation& p);
bool is_identity(const Word& w, const GroupPresentation& p);

// Everything read from an input file.
struct CandidateSpec {
  std::vector<Word> edge_generators;
  std::optional<std::string> lambda;
  std::optional<std::string> epsilon;
};

struct InputSpec {
  std::shared_ptr<const GroupPresentation> presentation;
  std::vector<Word> subgroup_generators;
  std::map<std::string, std::string> constants;
  std::vector<CandidateSpec> candidates;
};

GroupPresentation parse_presentation(const std::string& text);
InputSpec parse_input(const std::string& text);
InputSpec load_input(const std::string& path);

}  // namespace hyp
