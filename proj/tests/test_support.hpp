#pragma once

#include <array>
#include <random>
#include <cmath>
#include <vector>

#include "branchflow/graph.hpp"

namespace testsupport {

using branchflow::Atom;
using branchflow::Position;
using branchflow::TransportGraph;

inline TransportGraph make_graph(
    const std::vector<Position>& positions,
    const std::vector<std::array<double, 3>>& edges) {
  TransportGraph g;
  for (size_t i = 0; i < positions.size(); ++i)
    g.vertices.push_back({static_cast<int>(i), positions[i]});
  int id = 0;
  for (const auto& [tail, head, weight] : edges) {
    if (weight == 0.0) continue;
    if (weight > 0.0)
      g.edges.push_back({id++, static_cast<int>(tail), static_cast<int>(head),
                         weight});
    else
      g.edges.push_back({id++, static_cast<int>(head), static_cast<int>(tail),
                         -weight});
  }
  return g;
}

// Triangle with side lengths |x1x2| = 1, |x2x3| = 1, |x1x3| = 1.5 carrying
// weights (0.5 - t, 1 - t, 1 + t) on edges x1->x2, x2->x3, x1->x3; negative
// weights flip the edge. The one-parameter family of currents sharing the
// triangle's support.
inline TransportGraph triangle(double t = 0.0) {
  const Position x1{0.0, 0.0};
  const Position x2{0.75, std::sqrt(0.4375)};
  const Position x3{1.5, 0.0};
  return make_graph({x1, x2, x3},
                    {{0, 1, 0.5 - t}, {1, 2, 1.0 - t}, {0, 2, 1.0 + t}});
}

// 2.5 + 0.5 -> 3 instance: straight double channel from x1 plus a Y for the
// two half-unit remainders through b = (0, 2).
inline TransportGraph y_graph() {
  const Position x1{-1.0, 3.0};
  const Position x2{1.0, 3.0};
  const Position b{0.0, 2.0};
  const Position y{0.0, 0.0};
  return make_graph({x1, x2, b, y},
                    {{0, 2, 0.5}, {1, 2, 0.5}, {2, 3, 1.0}, {0, 3, 2.0}});
}

inline const double kSqrt2 = std::sqrt(2.0);
inline const double kF0 = 2.5 + kSqrt2 / 2.0;
inline const double kFHalf = 1.5 + kSqrt2 / 2.0 + 3.0 * kSqrt2 / 4.0;
inline const double kFNegHalf = 2.0 + kSqrt2 / 2.0 + 3.0 * kSqrt2 / 4.0;
inline const double kFOne = 3.0 + kSqrt2 / 2.0;

struct Corridor {
  TransportGraph graph;
  std::vector<int> path;      // vertex ids along the polyline
  double theta0 = 0.0;        // minimum channel count on the path
  double path_length = 0.0;
  double chord_length = 0.0;
};

// Random bent polyline whose every edge carries at least one full channel.
template <typename Rng>
Corridor random_corridor(Rng& rng, double capacity) {
  std::uniform_int_distribution<int> nv(3, 6);
  std::uniform_real_distribution<double> coord(0.0, 5.0);
  std::uniform_int_distribution<int> channels(1, 3);
  std::uniform_real_distribution<double> rem(0.0, 0.9 * capacity);

  Corridor c;
  const int n = nv(rng);
  std::vector<Position> pts;
  while (static_cast<int>(pts.size()) < n) {
    Position p{coord(rng), coord(rng)};
    bool clear = true;
    for (const Position& q : pts) clear &= branchflow::distance(p, q) > 0.2;
    if (clear) pts.push_back(p);
  }
  std::vector<std::array<double, 3>> edges;
  c.theta0 = 1e9;
  for (int i = 0; i + 1 < n; ++i) {
    const double k = channels(rng);
    edges.push_back({double(i), double(i + 1), k * capacity + rem(rng)});
    c.theta0 = std::min(c.theta0, k);
    c.path_length += branchflow::distance(pts[i], pts[i + 1]);
  }
  c.chord_length = branchflow::distance(pts.front(), pts.back());
  c.graph = make_graph(pts, edges);
  for (int i = 0; i < n; ++i) c.path.push_back(i);
  return c;
}

}  // namespace testsupport
