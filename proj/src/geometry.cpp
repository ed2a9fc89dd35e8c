#include "branchflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace branchflow {

namespace {

Position sub(const Position& a, const Position& b) {
  Position r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double norm(const Position& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

void axpy(Position& acc, double s, const Position& v) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += s * v[i];
}

double angle_between(const Position& a, const Position& b) {
  double dot = 0.0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double na = norm(a), nb = norm(b);
  const double c = std::clamp(dot / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

constexpr double kGuardRadius = 1e-9;

}  // namespace

JunctionCoefficients junction_coefficients(const JunctionProblem& p) {
  const double ca = std::pow(p.params.capacity, p.params.alpha);
  JunctionCoefficients k;
  k.k1 = ca * h_value(p.m1, p.params);
  k.k2 = ca * h_value(p.m2, p.params);
  k.k3 = ca * h_value(p.m1 + p.m2, p.params);
  return k;
}

double junction_cost(const JunctionProblem& p, const Position& t) {
  const JunctionCoefficients k = junction_coefficients(p);
  return k.k1 * distance(p.x1, t) + k.k2 * distance(p.x2, t) +
         k.k3 * distance(p.y, t);
}

Position junction_gradient(const JunctionProblem& p, const Position& t) {
  const JunctionCoefficients k = junction_coefficients(p);
  Position g(t.size(), 0.0);
  const std::array<const Position*, 3> a{&p.x1, &p.x2, &p.y};
  const std::array<double, 3> rates{k.k1, k.k2, k.k3};
  for (int i = 0; i < 3; ++i) {
    const double d = distance(*a[i], t);
    if (d <= kGuardRadius) continue;
    axpy(g, rates[i] / d, sub(t, *a[i]));
  }
  return g;
}

FermatResult weighted_fermat(const std::array<Position, 3>& anchors,
                             const std::array<double, 3>& rates,
                             double tol_grad, int max_iter) {
  const size_t dim = anchors[0].size();
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      scale = std::max(scale, distance(anchors[i], anchors[j]));

  auto cost_at = [&](const Position& t) {
    double f = 0.0;
    for (int i = 0; i < 3; ++i) f += rates[i] * distance(anchors[i], t);
    return f;
  };

  // One-sided optimality at each terminal: the terminal minimizes F when the
  // resultant pull of the other legs stays within its own rate. Coincident
  // anchors fold their rate into the terminal's.
  for (int i = 0; i < 3; ++i) {
    Position pull(dim, 0.0);
    double capacity = rates[i];
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const double d = distance(anchors[i], anchors[j]);
      if (d <= kPosTol) {
        capacity += rates[j];
        continue;
      }
      axpy(pull, rates[j] / d, sub(anchors[j], anchors[i]));
    }
    if (norm(pull) <= capacity + 1e-15 * (capacity + 1.0)) {
      FermatResult r;
      r.point = anchors[i];
      r.cost = cost_at(anchors[i]);
      r.degenerate = true;
      r.terminal = i;
      return r;
    }
  }

  Position t(dim, 0.0);
  for (int i = 0; i < 3; ++i) axpy(t, 1.0 / 3.0, anchors[i]);
  auto nudge_off = [&](int i) {
    // Interior minimizer exists; leave the terminal along the pull of the
    // other legs.
    Position pull(dim, 0.0);
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const double d = distance(anchors[i], anchors[j]);
      if (d <= kPosTol) continue;
      axpy(pull, rates[j] / d, sub(anchors[j], anchors[i]));
    }
    const double n = norm(pull);
    t = anchors[i];
    if (n > 0.0) axpy(t, 1e-6 * scale / n, pull);
  };
  for (int i = 0; i < 3; ++i)
    if (distance(t, anchors[i]) <= kGuardRadius) nudge_off(i);

  auto gradient_at = [&](const Position& q) {
    Position g(dim, 0.0);
    for (int i = 0; i < 3; ++i) {
      const double d = distance(anchors[i], q);
      axpy(g, rates[i] / d, sub(q, anchors[i]));
    }
    return g;
  };
  auto near_anchor = [&](const Position& q) {
    for (int i = 0; i < 3; ++i)
      if (distance(q, anchors[i]) <= kGuardRadius) return i;
    return -1;
  };

  double f = cost_at(t);
  for (int iter = 0; iter < max_iter; ++iter) {
    const int near = near_anchor(t);
    if (near >= 0) {
      nudge_off(near);
      f = cost_at(t);
      continue;
    }

    const Position grad = gradient_at(t);
    const double gn = norm(grad);
    if (gn <= tol_grad) {
      FermatResult r;
      r.point = t;
      r.cost = f;
      r.iterations = iter;
      return r;
    }

    // Newton polish on the stationarity condition; the Hessian of
    // sum k_i |t - a_i| is sum (k_i / d_i) (I - u u^T). Accepted only when
    // it at least halves the gradient norm, so far-field divergence falls
    // back to the Weiszfeld step below.
    if (dim == 2) {
      double hxx = 0.0, hxy = 0.0, hyy = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double d = distance(anchors[i], t);
        const double ux = (t[0] - anchors[i][0]) / d;
        const double uy = (t[1] - anchors[i][1]) / d;
        hxx += rates[i] / d * uy * uy;
        hyy += rates[i] / d * ux * ux;
        hxy -= rates[i] / d * ux * uy;
      }
      const double det = hxx * hyy - hxy * hxy;
      if (det > 1e-30) {
        const Position cand{t[0] - (hyy * grad[0] - hxy * grad[1]) / det,
                            t[1] - (-hxy * grad[0] + hxx * grad[1]) / det};
        if (near_anchor(cand) < 0 && norm(gradient_at(cand)) <= 0.5 * gn) {
          t = cand;
          f = cost_at(t);
          continue;
        }
      }
    }

    // Damped Weiszfeld step, gradient backtracking when it fails to improve.
    double wsum = 0.0;
    Position wpoint(dim, 0.0);
    for (int i = 0; i < 3; ++i) {
      const double d = distance(anchors[i], t);
      wsum += rates[i] / d;
      axpy(wpoint, rates[i] / d, anchors[i]);
    }
    Position next = t;
    for (size_t d = 0; d < dim; ++d) next[d] = 0.5 * t[d] + 0.5 * wpoint[d] / wsum;
    const double fn = cost_at(next);
    if (fn < f) {
      t = next;
      f = fn;
      continue;
    }
    double step = 0.5 * scale;
    bool moved = false;
    while (step > 1e-17 * scale) {
      Position cand = t;
      axpy(cand, -step / gn, grad);
      const double fc = cost_at(cand);
      if (fc < f) {
        t = cand;
        f = fc;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // Stuck at floating point resolution; accept if the gradient is small.
      if (gn <= 1e3 * tol_grad) {
        FermatResult r;
        r.point = t;
        r.cost = f;
        r.iterations = iter;
        return r;
      }
      throw NoConvergence("weighted Fermat iteration stalled");
    }
  }
  throw NoConvergence("weighted Fermat iteration exceeded max_iter");
}

JunctionSolution solve_junction(const JunctionProblem& p, double tol_grad) {
  if (p.x1.size() != 2 || p.x2.size() != 2 || p.y.size() != 2)
    throw UnsupportedDimension("junction solving is planar");
  if (!(p.m1 > 0.0) || !(p.m2 > 0.0))
    throw PreconditionUnmet("junction masses must be positive");
  if (same_position(p.x1, p.x2) && same_position(p.x2, p.y))
    throw PreconditionUnmet("junction terminals coincide");

  const JunctionCoefficients k = junction_coefficients(p);
  const FermatResult r = weighted_fermat({p.x1, p.x2, p.y}, {k.k1, k.k2, k.k3},
                                         tol_grad);
  JunctionSolution s;
  s.t = r.point;
  s.cost = r.cost;
  s.degenerate = r.degenerate;
  s.degenerate_terminal = r.terminal;
  s.iterations = r.iterations;
  if (!s.degenerate) s.angles = angles_from_coefficients(k.k1, k.k2, k.k3);
  return s;
}

std::array<double, 3> angles_from_coefficients(double k1, double k2, double k3) {
  auto angle = [](double num, double den) {
    return std::acos(std::clamp(num / den, -1.0, 1.0));
  };
  return {angle(k1 * k1 + k3 * k3 - k2 * k2, 2.0 * k1 * k3),
          angle(k2 * k2 + k3 * k3 - k1 * k1, 2.0 * k2 * k3),
          angle(k3 * k3 - k1 * k1 - k2 * k2, 2.0 * k1 * k2)};
}

JunctionAngles junction_angles(const JunctionSolution& sol,
                               const JunctionProblem& p) {
  if (sol.degenerate)
    throw DegenerateJunction("angles are undefined at a terminal junction");
  const JunctionCoefficients k = junction_coefficients(p);
  JunctionAngles a;
  a.from_coefficients = angles_from_coefficients(k.k1, k.k2, k.k3);
  const Position leg1 = sub(p.x1, sol.t);
  const Position leg2 = sub(p.x2, sol.t);
  const Position out = sub(sol.t, p.y);
  a.measured = {angle_between(leg1, out), angle_between(leg2, out),
                angle_between(leg1, leg2)};
  return a;
}

namespace {

struct PathEdges {
  std::vector<size_t> indices;  // into g.edges, one per consecutive pair
  double path_length = 0.0;
  double min_whole = 0.0;
};

PathEdges resolve_path(const TransportGraph& g, const std::vector<int>& path,
                       const CostParams& params) {
  if (path.size() < 2)
    throw PreconditionUnmet("corridor path needs at least two vertices");
  std::set<int> seen(path.begin(), path.end());
  if (seen.size() != path.size())
    throw PreconditionUnmet("corridor path must be simple");
  PathEdges out;
  out.min_whole = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (!g.vertex_by_id(path[i]) || !g.vertex_by_id(path[i + 1]))
      throw PreconditionUnmet("corridor path references a missing vertex");
    size_t found = g.edges.size();
    for (size_t j = 0; j < g.edges.size(); ++j) {
      if (g.edges[j].tail == path[i] && g.edges[j].head == path[i + 1]) {
        found = j;
        break;
      }
    }
    if (found == g.edges.size())
      throw PreconditionUnmet("corridor path is not a directed polyline of the graph");
    out.indices.push_back(found);
    out.path_length += g.edge_length(g.edges[found]);
    out.min_whole =
        std::min(out.min_whole, h_parts(g.edges[found].weight, params).whole);
  }
  return out;
}

}  // namespace

TransportGraph straighten_integer_corridor(const TransportGraph& g,
                                           const std::vector<int>& path,
                                           const CostParams& params) {
  const PathEdges pe = resolve_path(g, path, params);
  const double theta0 = pe.min_whole;
  if (theta0 < 1.0) return g;  // nothing to reroute

  const double shift = theta0 * params.capacity;
  TransportGraph delta;
  for (size_t i = 0; i < path.size(); ++i)
    delta.vertices.push_back(
        {static_cast<int>(i), g.vertex_by_id(path[i])->pos});
  int eid = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i)
    delta.edges.push_back({eid++, static_cast<int>(i + 1), static_cast<int>(i), shift});
  delta.edges.push_back({eid, 0, static_cast<int>(path.size() - 1), shift});
  return canonicalize(add_graphs(g, delta));
}

std::pair<TransportGraph, TransportGraph> separate_corridor(
    const TransportGraph& g, const std::vector<int>& path, int theta1,
    const CostParams& params) {
  if (theta1 < 0) throw PreconditionUnmet("corridor multiplicity must be >= 0");
  if (theta1 == 0) return {TransportGraph{}, g};
  const PathEdges pe = resolve_path(g, path, params);
  if (static_cast<double>(theta1) > pe.min_whole)
    throw PreconditionUnmet("corridor multiplicity exceeds the channel count");

  const double shift = theta1 * params.capacity;
  TransportGraph corridor;
  for (size_t i = 0; i < path.size(); ++i)
    corridor.vertices.push_back(
        {static_cast<int>(i), g.vertex_by_id(path[i])->pos});
  for (size_t i = 0; i + 1 < path.size(); ++i)
    corridor.edges.push_back(
        {static_cast<int>(i), static_cast<int>(i), static_cast<int>(i + 1), shift});

  TransportGraph remainder = g;
  for (size_t idx : pe.indices) remainder.edges[idx].weight -= shift;
  const double drop = std::max(kWeightTol, params.capacity * params.int_snap);
  std::vector<Edge> kept;
  for (const Edge& e : remainder.edges)
    if (std::abs(e.weight) > drop) kept.push_back(e);
  remainder.edges = std::move(kept);
  return {canonicalize(corridor), canonicalize(remainder)};
}

std::vector<std::vector<int>> find_integer_corridors(const TransportGraph& g,
                                                     const CostParams& params) {
  std::vector<const Edge*> by_id;
  for (const Edge& e : g.edges)
    if (h_parts(e.weight, params).whole >= 1.0) by_id.push_back(&e);
  std::sort(by_id.begin(), by_id.end(),
            [](const Edge* a, const Edge* b) { return a->id < b->id; });

  std::set<int> used;
  std::vector<std::vector<int>> corridors;
  for (const Edge* seed : by_id) {
    if (used.count(seed->id)) continue;
    used.insert(seed->id);
    std::vector<int> verts{seed->tail, seed->head};
    // grow forward from the head, then backward from the tail
    for (bool forward : {true, false}) {
      while (true) {
        const int cur = forward ? verts.back() : verts.front();
        const Edge* next = nullptr;
        for (const Edge* e : by_id) {
          if (used.count(e->id)) continue;
          const int from = forward ? e->tail : e->head;
          const int to = forward ? e->head : e->tail;
          if (from != cur) continue;
          if (std::find(verts.begin(), verts.end(), to) != verts.end()) continue;
          next = e;
          break;
        }
        if (!next) break;
        used.insert(next->id);
        if (forward)
          verts.push_back(next->head);
        else
          verts.insert(verts.begin(), next->tail);
      }
    }
    corridors.push_back(std::move(verts));
  }
  return corridors;
}

}  // namespace branchflow
