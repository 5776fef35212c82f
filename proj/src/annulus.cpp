#include "hyp/annulus.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hyp/digraph.hpp"

namespace hyp {

PointClass classify_point(const SubgroupView& v, const ConstantLedger& g, Vertex x) {
  PointClass pc;
  pc.height = v.height(x);
  if (pc.height < g.r) {
    pc.region = Region::Below;
  } else if (pc.height <= g.R) {
    pc.region = Region::Annulus;
    pc.on_CK = pc.height == g.K;
  } else {
    pc.region = Region::Above;
  }
  return pc;
}

int FiniteCover::index_of(Vertex v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) return -1;
  return static_cast<int>(it - vertices.begin());
}

int FiniteCover::component_of(Vertex v) const {
  int i = index_of(v);
  return i < 0 ? -1 : comp[static_cast<std::size_t>(i)];
}

int FiniteCover::marked_count() const {
  return static_cast<int>(std::count(marked.begin(), marked.end(), 1));
}

FiniteCover make_cover(const SubgroupView& v, const ConstantLedger& g, std::vector<Vertex> vertices,
                       std::vector<Vertex> basepoints, int generation) {
  const CayleyBall& b = v.ball();
  FiniteCover F;
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  F.vertices = std::move(vertices);
  F.basepoints = std::move(basepoints);
  F.generation = generation;
  F.r = g.r;
  F.K = g.K;
  F.R = g.R;
  const std::size_t n = F.vertices.size();
  F.heights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    F.heights[i] = v.height(F.vertices[i]);
    if (F.heights[i] < g.r || F.heights[i] > g.R)
      fail(ErrorKind::Precondition, "cover vertex outside the annulus");
  }
  F.comp.assign(n, -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (F.comp[s] >= 0) continue;
    F.components.emplace_back();
    F.marked.push_back(0);
    F.comp[s] = next;
    stack.assign(1, s);
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      F.components.back().push_back(F.vertices[i]);
      if (F.heights[i] == g.K) F.marked.back() = 1;
      for (int x = 0; x < b.degree(); ++x) {
        Vertex w = b.neighbor(F.vertices[i], static_cast<Letter>(x));
        if (w < 0) continue;
        int j = F.index_of(w);
        if (j < 0 || F.comp[static_cast<std::size_t>(j)] >= 0) continue;
        F.comp[static_cast<std::size_t>(j)] = next;
        stack.push_back(static_cast<std::size_t>(j));
      }
    }
    std::sort(F.components.back().begin(), F.components.back().end());
    ++next;
  }
  return F;
}

int cover_radius_needed(const SubgroupView& v, const ConstantLedger& g, Vertex x) {
  return v.ball().layer(x) + 2 * v.context().l() + g.R;
}

FiniteCover build_cover(const SubgroupView& v, const ConstantLedger& g, Vertex x) {
  const CayleyBall& b = v.ball();
  const int need = cover_radius_needed(v, g, x);
  if (need > b.radius())
    fail(ErrorKind::InsufficientRadius, "cover around the point needs ball radius " + std::to_string(need) +
                                            ", have " + std::to_string(b.radius()));
  BallSearch bs(b);
  bs.run({x}, 2 * v.context().l() + g.R);
  std::vector<Vertex> keep;
  for (Vertex w : bs.visited()) {
    int h = v.height(w);
    if (h >= g.r && h <= g.R) keep.push_back(w);
  }
  return make_cover(v, g, std::move(keep), {x}, 0);
}

FiniteCover minimal_cover(const SubgroupView& v, const ConstantLedger& g) {
  const CayleyBall& b = v.ball();
  if (g.R + 1 > b.radius())
    fail(ErrorKind::InsufficientRadius, "minimal cover needs ball radius " + std::to_string(g.R + 1) +
                                            ", have " + std::to_string(b.radius()));
  std::vector<Vertex> keep;
  const Vertex lo = b.layer_begin(g.r), hi = b.layer_begin(g.R + 1);
  for (Vertex x = lo; x < hi; ++x) {
    if (v.height(x) != b.layer(x)) continue;
    keep.push_back(x);
    for (int s = 0; s < b.degree(); ++s) {
      Vertex y = b.neighbor(x, static_cast<Letter>(s));
      if (y < 0) continue;
      int h = v.height(y);
      if (h >= g.r && h <= g.R) keep.push_back(y);
    }
  }
  return make_cover(v, g, std::move(keep), {0}, 0);
}

FiniteCover grow_cover(const FiniteCover& F, const SubgroupView& v, const ConstantLedger& g) {
  const CayleyBall& b = v.ball();
  std::vector<Vertex> out = F.vertices;
  for (Vertex x : F.vertices) {
    Word rx = b.rep(x);
    for (const Word& y : v.context().generators()) {
      for (const Word& s : {y, inverse(y)}) {
        Vertex t = b.locate(concat(s, rx));
        if (t == kNone) fail(ErrorKind::InsufficientRadius, "a translate of the cover leaves the ball");
        out.push_back(t);
      }
    }
  }
  return make_cover(v, g, std::move(out), F.basepoints, F.generation + 1);
}

bool in_arrk(const SubgroupView& v, const ConstantLedger& g, Vertex x) {
  if (classify_point(v, g, x).region != Region::Annulus) return false;
  FiniteCover F = build_cover(v, g, x);
  AdjacencyDigraph D = build_digraph(F, v, DigraphMode::Reduced);
  auto dc = digraph_components(D);
  int cx = F.component_of(x);
  for (int c = 0; c < D.vertex_count; ++c)
    if (dc[static_cast<std::size_t>(c)] == dc[static_cast<std::size_t>(cx)] && D.marked[static_cast<std::size_t>(c)])
      return true;
  return false;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Below: return "below";
    case Region::Annulus: return "annulus";
    case Region::Above: return "above";
  }
  return "?";
}

}  // namespace hyp
