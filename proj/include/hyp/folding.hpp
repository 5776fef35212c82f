#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyp/presentation.hpp"

namespace hyp {

// Rooted labelled graph obtained from a bouquet of generator loops by
// identifying equally labelled edge pairs until none remain.  Labels are
// letters of an alphabet of size 2*rank, with inverse edges stored.
class FoldedGraph {
 public:
  FoldedGraph() = default;

  int rank() const { return rank_; }
  bool folded() const { return folded_; }
  int vertex_count() const { return static_cast<int>(out_.size() / static_cast<std::size_t>(2 * rank_)); }
  int root() const { return 0; }
  // -1 when there is no edge
  int target(int v, Letter x) const { return out_[static_cast<std::size_t>(v) * static_cast<std::size_t>(2 * rank_) + x]; }
  std::int64_t edge_count() const;  // undirected edges
  // Generator word carried by the edge: reading a loop at the root and
  // concatenating these words gives the loop as a product of generators
  // (letter 2k is generator k, 2k+1 its inverse).
  const Word& label(int v, Letter x) const {
    return label_[static_cast<std::size_t>(v) * static_cast<std::size_t>(2 * rank_) + x];
  }
  // Rank of the free group read at the root (edges - vertices + 1).
  std::int64_t subgroup_rank() const { return edge_count() - vertex_count() + 1; }

 private:
  friend FoldedGraph fold(int rank, const std::vector<Word>& generators);
  int rank_ = 0;
  bool folded_ = false;
  std::vector<int> out_;
  std::vector<Word> label_;
};

FoldedGraph fold(int rank, const std::vector<Word>& generators);
bool folded_member(const FoldedGraph& g, const Word& w);
// A product of generators equal to w, when w is read as a loop at the root.
std::optional<Word> folded_witness(const FoldedGraph& g, const Word& w);

}  // namespace hyp
