#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hyp/presentation.hpp"

namespace hyp {

using Vertex = std::int32_t;
constexpr Vertex kNone = -1;

// Finite ball of the Cayley graph around the identity.  Vertices are indexed
// in shortlex order of their representatives, so layer j occupies the index
// range [layer_begin(j), layer_begin(j+1)).
class CayleyBall {
 public:
  CayleyBall() = default;

  int radius() const { return radius_; }
  bool complete() const { return complete_; }
  const GroupPresentation& presentation() const { return *pres_; }
  std::shared_ptr<const GroupPresentation> presentation_ptr() const { return pres_; }

  std::int64_t size() const { return static_cast<std::int64_t>(layer_.size()); }
  int degree() const { return degree_; }
  int layer(Vertex v) const { return layer_[static_cast<std::size_t>(v)]; }
  Vertex neighbor(Vertex v, Letter x) const {
    return nbr_[static_cast<std::size_t>(v) * static_cast<std::size_t>(degree_) + x];
  }
  Vertex parent(Vertex v) const { return parent_[static_cast<std::size_t>(v)]; }
  Letter parent_letter(Vertex v) const { return parent_letter_[static_cast<std::size_t>(v)]; }
  Vertex layer_begin(int j) const;
  std::int64_t sphere_size(int j) const { return layer_begin(j + 1) - layer_begin(j); }

  Word rep(Vertex v) const;
  // Follows edges from v; kNone if the walk leaves the ball.
  Vertex trace(Vertex v, const Word& w) const;
  // Locates the element represented by w, or kNone if it lies outside.  Words
  // whose free reduction has length at most the radius are always located
  // when they lie in the ball.
  Vertex locate(const Word& w) const;

  std::int64_t edge_count() const;

 private:
  friend CayleyBall build_ball(std::shared_ptr<const GroupPresentation>, int, std::int64_t);
  int radius_ = 0;
  int degree_ = 0;
  bool complete_ = false;
  std::shared_ptr<const GroupPresentation> pres_;
  std::vector<int> layer_;
  std::vector<Vertex> nbr_;
  std::vector<Vertex> parent_;
  std::vector<Letter> parent_letter_;
  std::vector<Vertex> layer_start_;
};

CayleyBall build_ball(std::shared_ptr<const GroupPresentation> p, int radius,
                      std::int64_t vertex_budget);

// Breadth-first searches inside a ball with reusable scratch storage.
class BallSearch {
 public:
  explicit BallSearch(const CayleyBall& b);

  // Distances from the sources, stopping after max_depth.  Unreached
  // vertices report -1 through dist().
  void run(const std::vector<Vertex>& sources, int max_depth);
  // As run(), restricted to vertices accepted by allow.
  template <class Allow>
  void run_filtered(const std::vector<Vertex>& sources, int max_depth, Allow allow);

  int dist(Vertex v) const {
    return stamp_[static_cast<std::size_t>(v)] == epoch_ ? dist_[static_cast<std::size_t>(v)] : -1;
  }
  const std::vector<Vertex>& visited() const { return order_; }

 private:
  const CayleyBall& b_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::vector<Vertex> order_;
  std::uint32_t epoch_ = 0;
};

template <class Allow>
void BallSearch::run_filtered(const std::vector<Vertex>& sources, int max_depth, Allow allow) {
  ++epoch_;
  order_.clear();
  for (Vertex s : sources) {
    if (stamp_[static_cast<std::size_t>(s)] == epoch_) continue;
    stamp_[static_cast<std::size_t>(s)] = epoch_;
    dist_[static_cast<std::size_t>(s)] = 0;
    order_.push_back(s);
  }
  for (std::size_t head = 0; head < order_.size(); ++head) {
    Vertex u = order_[head];
    int du = dist_[static_cast<std::size_t>(u)];
    if (du >= max_depth) continue;
    for (int x = 0; x < b_.degree(); ++x) {
      Vertex v = b_.neighbor(u, static_cast<Letter>(x));
      if (v < 0 || stamp_[static_cast<std::size_t>(v)] == epoch_ || !allow(v)) continue;
      stamp_[static_cast<std::size_t>(v)] = epoch_;
      dist_[static_cast<std::size_t>(v)] = du + 1;
      order_.push_back(v);
    }
  }
}

// Exact d(x,y) when the certificate layer(x)+layer(y)+d <= 2*radius holds
// (every geodesic between x and y then lies in the ball), otherwise nullopt.
std::optional<int> ball_distance(const CayleyBall& b, Vertex x, Vertex y);

struct DeltaSampling {
  int triangle_radius = 2;      // triangle corners range over B_m(1)
  std::int64_t samples = 0;     // 0 = exhaustive over corner pairs
  std::uint64_t seed = 1;
  int workers = 1;
};

struct DeltaEstimate {
  int delta = 0;
  std::int64_t triangles = 0;
  std::int64_t skipped = 0;  // triangles whose distances were not certified
};

DeltaEstimate estimate_delta(const CayleyBall& b, const DeltaSampling& sample);

struct DaggerRadius {
  int R0 = 0;
  std::int64_t pairs = 0;
  enum class Status { Bound, Failure, Inconclusive } status = Status::Bound;
  int n = 0;            // max over pairs of the shortest outside path found
  bool exact = true;    // every reported shortest length is certified minimal
  int horizon = 0;      // outside paths up to this length always fit in the ball
};

struct DaggerVerdict {
  int M = 0;
  int n_max = 0;
  bool implicit_free = false;  // searched the infinite tree directly
  std::vector<DaggerRadius> per_radius;
  std::optional<int> n;
};

struct DaggerOptions {
  int r0_min = 1;
  int r0_max = -1;  // -1: radius - 1
  int workers = 1;
};

DaggerVerdict check_double_dagger(const CayleyBall& b, int M, int n_max,
                                  const DaggerOptions& opt = {});

const char* dagger_status_name(DaggerRadius::Status s);

}  // namespace hyp
