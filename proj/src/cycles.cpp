#include "branchflow/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace branchflow {

Cycle flip_cycle(const Cycle& cy) {
  Cycle out;
  out.edges.assign(cy.edges.rbegin(), cy.edges.rend());
  for (CycleEdge& ce : out.edges) ce.sign = -ce.sign;
  out.aligned_length = cy.anti_length;
  out.anti_length = cy.aligned_length;
  return out;
}

namespace {

Cycle build_cycle(const TransportGraph& g, int from, int ancestor,
                  const Edge* closing, const std::map<int, int>& parent,
                  const std::map<int, const Edge*>& parent_edge) {
  Cycle cy;
  int cur = from;
  while (cur != ancestor) {
    const Edge* pe = parent_edge.at(cur);
    cy.edges.push_back({pe->id, pe->tail == cur ? +1 : -1});
    cur = parent.at(cur);
  }
  cy.edges.push_back({closing->id, closing->tail == ancestor ? +1 : -1});
  for (const CycleEdge& ce : cy.edges) {
    const double len = g.edge_length(*g.edge_by_id(ce.edge_id));
    (ce.sign > 0 ? cy.aligned_length : cy.anti_length) += len;
  }
  return cy;
}

}  // namespace

std::vector<Cycle> fundamental_cycles(const TransportGraph& g) {
  // One representative edge per unordered endpoint pair; parallel edges lie
  // on the same segment and cannot close a support cycle on their own.
  std::map<std::pair<int, int>, const Edge*> repr;
  {
    std::vector<const Edge*> by_id;
    for (const Edge& e : g.edges) by_id.push_back(&e);
    std::sort(by_id.begin(), by_id.end(),
              [](const Edge* a, const Edge* b) { return a->id < b->id; });
    for (const Edge* e : by_id) {
      const auto key = std::minmax(e->tail, e->head);
      repr.emplace(std::pair<int, int>{key.first, key.second}, e);
    }
  }

  std::map<int, std::vector<const Edge*>> adj;
  for (const auto& [key, e] : repr) {
    adj[e->tail].push_back(e);
    adj[e->head].push_back(e);
  }
  for (auto& [id, list] : adj)
    std::sort(list.begin(), list.end(),
              [](const Edge* a, const Edge* b) { return a->id < b->id; });

  std::vector<int> vertex_ids;
  for (const Vertex& v : g.vertices) vertex_ids.push_back(v.id);
  std::sort(vertex_ids.begin(), vertex_ids.end());

  std::map<int, int> state;  // 0 new, 1 on path, 2 done
  std::map<int, int> parent;
  std::map<int, const Edge*> parent_edge;
  std::set<int> seen_nontree;
  std::vector<Cycle> out;

  for (int root : vertex_ids) {
    if (state[root] != 0) continue;
    std::vector<std::pair<int, size_t>> stack{{root, 0}};
    state[root] = 1;
    parent[root] = -1;
    parent_edge[root] = nullptr;
    while (!stack.empty()) {
      const int u = stack.back().first;
      const std::vector<const Edge*>& around = adj[u];
      if (stack.back().second >= around.size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      const Edge* e = around[stack.back().second++];
      if (e == parent_edge[u]) continue;
      const int v = (e->tail == u) ? e->head : e->tail;
      if (state[v] == 0) {
        state[v] = 1;
        parent[v] = u;
        parent_edge[v] = e;
        stack.push_back({v, 0});
      } else if (state[v] == 1 && !seen_nontree.count(e->id)) {
        seen_nontree.insert(e->id);
        out.push_back(build_cycle(g, u, v, e, parent, parent_edge));
      }
    }
  }
  return out;
}

std::optional<Cycle> find_cycle(const TransportGraph& g) {
  std::vector<Cycle> all = fundamental_cycles(g);
  if (all.empty()) return std::nullopt;
  return all.front();
}

bool is_cycle_free(const TransportGraph& g) { return !find_cycle(g).has_value(); }

namespace {

// Deterministic pick between a traversal and its reverse when both qualify.
Cycle tie_pick(const Cycle& cy) {
  const Cycle f = flip_cycle(cy);
  const CycleEdge& a = cy.edges.front();
  const CycleEdge& b = f.edges.front();
  if (a.edge_id != b.edge_id) return a.edge_id < b.edge_id ? cy : f;
  return a.sign >= b.sign ? cy : f;
}

struct CycleView {
  Cycle cycle;                     // signs as traversed, lengths recomputed
  std::vector<const Edge*> edges;  // parallel to cycle.edges
};

CycleView resolve(const TransportGraph& g, const Cycle& cy) {
  CycleView view;
  view.cycle = cy;
  view.cycle.aligned_length = 0.0;
  view.cycle.anti_length = 0.0;
  for (const CycleEdge& ce : cy.edges) {
    const Edge* e = g.edge_by_id(ce.edge_id);
    if (!e) throw PreconditionUnmet("cycle references a missing edge");
    view.edges.push_back(e);
    const double len = g.edge_length(*e);
    (ce.sign > 0 ? view.cycle.aligned_length : view.cycle.anti_length) += len;
  }
  return view;
}

TransportGraph apply_cycle_shift(const TransportGraph& g, const Cycle& cy,
                                 double amount, const CostParams& params) {
  TransportGraph out = g;
  std::map<int, size_t> index;
  for (size_t i = 0; i < out.edges.size(); ++i) index[out.edges[i].id] = i;
  for (const CycleEdge& ce : cy.edges)
    out.edges[index.at(ce.edge_id)].weight += ce.sign * amount;
  const double drop = std::max(kWeightTol, params.capacity * params.int_snap);
  std::vector<Edge> kept;
  for (const Edge& e : out.edges)
    if (std::abs(e.weight) > drop) kept.push_back(e);
  out.edges = std::move(kept);
  return out;
}

}  // namespace

TransportGraph reduce_integer_cycle(const TransportGraph& g, const Cycle& cy,
                                    const CostParams& params) {
  const CycleView view = resolve(g, cy);
  const double lp = view.cycle.aligned_length;
  const double lm = view.cycle.anti_length;
  const double ltol = 1e-12 * (lp + lm + 1.0);

  std::vector<Cycle> candidates;
  if (lp < lm - ltol) {
    candidates = {view.cycle};
  } else if (lm < lp - ltol) {
    candidates = {flip_cycle(view.cycle)};
  } else {
    const Cycle first = tie_pick(view.cycle);
    candidates = {first, flip_cycle(first)};
  }

  for (const Cycle& cand : candidates) {
    double n0 = std::numeric_limits<double>::infinity();
    bool has_anti = false;
    for (const CycleEdge& ce : cand.edges) {
      if (ce.sign >= 0) continue;
      has_anti = true;
      n0 = std::min(n0, h_parts(g.edge_by_id(ce.edge_id)->weight, params).whole);
    }
    if (!has_anti || n0 < 1.0) continue;
    return apply_cycle_shift(g, cand, n0 * params.capacity, params);
  }
  throw PreconditionUnmet(
      "integer cycle reduction: no admissible orientation carries a full "
      "channel on its anti-aligned side");
}

TransportGraph reduce_fractional_cycle(const TransportGraph& g, const Cycle& cy,
                                       const CostParams& params) {
  const CycleView view = resolve(g, cy);
  const double c = params.capacity;

  std::vector<double> remainder(view.edges.size());
  std::vector<double> length(view.edges.size());
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (size_t i = 0; i < view.edges.size(); ++i) {
    const Edge* e = view.edges[i];
    const HParts parts = h_parts(e->weight, params);
    remainder[i] = e->weight - parts.whole * c;
    length[i] = g.edge_length(*e);
    rmin = std::min(rmin, remainder[i]);
    rmax = std::max(rmax, remainder[i]);
  }
  if (rmin <= c * params.int_snap) return g;  // no remainder to move
  if (rmax + rmin > c * (1.0 + kIneqTol))
    throw PreconditionUnmet(
        "fractional cycle reduction: remainder max + min exceeds capacity");

  // First derivative of the cost in the shift direction, up to the positive
  // factor alpha * n2: sum over aligned edges of r^(alpha-1) * len minus the
  // same over anti-aligned ones. Non-positive means shifting cannot raise
  // the cost (concavity).
  double derivative = 0.0;
  double derivative_scale = 1.0;
  if (params.alpha > 0.0) {
    derivative_scale = 0.0;
    for (size_t i = 0; i < view.edges.size(); ++i) {
      const double term =
          std::pow(remainder[i], params.alpha - 1.0) * length[i];
      derivative += view.cycle.edges[i].sign > 0 ? term : -term;
      derivative_scale += term;
    }
  }

  std::vector<Cycle> candidates;
  const double dtol = 1e-12 * (derivative_scale + 1.0);
  if (params.alpha == 0.0 || std::abs(derivative) <= dtol) {
    const Cycle first = tie_pick(view.cycle);
    candidates = {first, flip_cycle(first)};
  } else if (derivative < 0.0) {
    candidates = {view.cycle};
  } else {
    candidates = {flip_cycle(view.cycle)};
  }

  std::map<int, double> rem_by_id;
  for (size_t i = 0; i < view.edges.size(); ++i)
    rem_by_id[view.edges[i]->id] = remainder[i];

  for (const Cycle& cand : candidates) {
    double n2 = std::numeric_limits<double>::infinity();
    double max_aligned = 0.0;
    bool has_anti = false;
    for (const CycleEdge& ce : cand.edges) {
      if (ce.sign < 0) {
        has_anti = true;
        n2 = std::min(n2, rem_by_id.at(ce.edge_id));
      } else {
        max_aligned = std::max(max_aligned, rem_by_id.at(ce.edge_id));
      }
    }
    if (!has_anti || n2 <= 0.0) continue;
    if (max_aligned + n2 > c * (1.0 + kIneqTol)) continue;  // would cross c
    return apply_cycle_shift(g, cand, n2, params);
  }
  throw PreconditionUnmet(
      "fractional cycle reduction: no orientation shifts the remainder "
      "without crossing the capacity");
}

namespace {

bool flows_match(const std::vector<std::pair<Position, double>>& a,
                 const std::vector<std::pair<Position, double>>& b,
                 double tol) {
  auto lookup = [](const std::vector<std::pair<Position, double>>& flows,
                   const Position& pos) {
    for (const auto& [p, f] : flows)
      if (same_position(p, pos)) return f;
    return 0.0;
  };
  for (const auto& [p, f] : a)
    if (std::abs(f - lookup(b, p)) > tol) return false;
  for (const auto& [p, f] : b)
    if (std::abs(f - lookup(a, p)) > tol) return false;
  return true;
}

template <typename ReduceFn>
std::vector<SkippedCycle> reduce_until_done(TransportGraph& part,
                                            ReduceFn reduce,
                                            const char* phase) {
  const size_t cap = part.edges.size() * part.edges.size() + 16;
  for (size_t attempt = 0; attempt < cap; ++attempt) {
    const std::vector<Cycle> cycles = fundamental_cycles(part);
    if (cycles.empty()) return {};
    std::vector<SkippedCycle> sweep;
    bool progressed = false;
    for (const Cycle& cy : cycles) {
      SkippedCycle record;
      for (const CycleEdge& ce : cy.edges) record.edge_ids.push_back(ce.edge_id);
      try {
        TransportGraph next = reduce(part, cy);
        if (graphs_identical(next, part)) {
          record.reason = std::string(phase) + ": zero remainder on cycle";
          sweep.push_back(std::move(record));
          continue;
        }
        part = std::move(next);
        progressed = true;
        break;
      } catch (const PreconditionUnmet& err) {
        record.reason = err.what();
        sweep.push_back(std::move(record));
      }
    }
    if (!progressed) return sweep;
  }
  return {SkippedCycle{{}, std::string(phase) + ": reduction attempt cap exceeded"}};
}

}  // namespace

Decomposition decompose(const TransportGraph& g, const CostParams& params) {
  const TransportGraph gc = canonicalize(g);
  const double cost_original = m_alpha_c(gc, params).total;
  const double c = params.capacity;

  TransportGraph full = gc;
  TransportGraph rest = gc;
  full.edges.clear();
  rest.edges.clear();
  for (const Edge& e : gc.edges) {
    const HParts parts = h_parts(e.weight, params);
    if (parts.whole >= 1.0) {
      Edge fe = e;
      fe.weight = parts.whole * c;
      full.edges.push_back(fe);
    }
    if (parts.frac > 0.0) {
      Edge re = e;
      re.weight = e.weight - parts.whole * c;
      rest.edges.push_back(re);
    }
  }
  Decomposition d;
  d.t1 = canonicalize(full);
  d.t2 = canonicalize(rest);

  std::vector<SkippedCycle> skipped = reduce_until_done(
      d.t1,
      [&](const TransportGraph& part, const Cycle& cy) {
        return reduce_integer_cycle(part, cy, params);
      },
      "integer phase");
  std::vector<SkippedCycle> skipped2 = reduce_until_done(
      d.t2,
      [&](const TransportGraph& part, const Cycle& cy) {
        return reduce_fractional_cycle(part, cy, params);
      },
      "fractional phase");
  skipped.insert(skipped.end(), skipped2.begin(), skipped2.end());

  DecompositionCertificate& cert = d.certificate;
  cert.cost_t1 = m_alpha_c(d.t1, params).total;
  cert.cost_t2 = m_alpha_c(d.t2, params).total;
  cert.cost_sum = cert.cost_t1 + cert.cost_t2;
  cert.cost_combined = m_alpha_c(add_graphs(d.t1, d.t2), params).total;
  cert.cost_original = cost_original;
  cert.t1_integer_multiples = true;
  for (const Edge& e : d.t1.edges)
    cert.t1_integer_multiples &= h_parts(e.weight, params).frac == 0.0;
  cert.t2_within_capacity = true;
  for (const Edge& e : d.t2.edges)
    cert.t2_within_capacity &= e.weight <= c * (1.0 + kIneqTol);
  double flow_scale = 1.0;
  for (const auto& [pos, f] : boundary_flows(gc))
    flow_scale = std::max(flow_scale, std::abs(f));
  cert.boundary_preserved =
      flows_match(boundary_flows(gc), boundary_flows(add_graphs(d.t1, d.t2)),
                  kMassTol * flow_scale);
  cert.t1_cycle_free = is_cycle_free(d.t1);
  cert.t2_cycle_free = is_cycle_free(d.t2);
  cert.unreduced = std::move(skipped);
  return d;
}

}  // namespace branchflow
