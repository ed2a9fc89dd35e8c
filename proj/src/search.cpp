#include "branchflow/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace branchflow {

namespace {

// Accumulates straight segments by endpoint positions into a graph.
class GraphBuilder {
 public:
  void segment(const Position& from, const Position& to, double w) {
    if (w <= kWeightTol) return;
    if (same_position(from, to)) return;
    const int a = vertex(from);
    const int b = vertex(to);
    g_.edges.push_back({static_cast<int>(g_.edges.size()), a, b, w});
  }

  TransportGraph take() { return canonicalize(g_); }

 private:
  int vertex(const Position& pos) {
    const int at = g_.vertex_at(pos);
    if (at >= 0) return g_.vertices[at].id;
    const int id = static_cast<int>(g_.vertices.size());
    g_.vertices.push_back({id, pos});
    return id;
  }

  TransportGraph g_;
};

}  // namespace

TransportGraph star_graph(const TransportProblem& p) {
  const double total = total_mass(p.source);
  GraphBuilder b;
  if (total > 0.0) {
    for (const Atom& s : p.source.atoms)
      for (const Atom& t : p.sink.atoms)
        b.segment(s.pos, t.pos, s.mass * t.mass / total);
  }
  return b.take();
}

namespace {

struct Window {
  double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
  double span() const { return std::max(hi_x - lo_x, hi_y - lo_y); }
};

Window padded_bbox(const std::vector<Position>& pts) {
  Window w;
  w.lo_x = w.lo_y = std::numeric_limits<double>::infinity();
  w.hi_x = w.hi_y = -std::numeric_limits<double>::infinity();
  for (const Position& p : pts) {
    w.lo_x = std::min(w.lo_x, p[0]);
    w.hi_x = std::max(w.hi_x, p[0]);
    w.lo_y = std::min(w.lo_y, p[1]);
    w.hi_y = std::max(w.hi_y, p[1]);
  }
  const double pad = 0.1 * std::max(w.span(), 1e-6);
  w.lo_x -= pad;
  w.hi_x += pad;
  w.lo_y -= pad;
  w.hi_y += pad;
  return w;
}

// Grid minimization of f over the window, with shrinking refinement rounds.
template <typename F>
std::pair<Position, double> grid_minimize(Window w, int res, int rounds, F f) {
  Position best{0.5 * (w.lo_x + w.hi_x), 0.5 * (w.lo_y + w.hi_y)};
  double best_f = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= rounds; ++round) {
    for (int i = 0; i < res; ++i) {
      for (int j = 0; j < res; ++j) {
        Position t{w.lo_x + (w.hi_x - w.lo_x) * i / (res - 1),
                   w.lo_y + (w.hi_y - w.lo_y) * j / (res - 1)};
        const double v = f(t);
        if (v < best_f) {
          best_f = v;
          best = t;
        }
      }
    }
    const double half = 0.25 * 0.5 * w.span();
    w = {best[0] - half, best[0] + half, best[1] - half, best[1] + half};
  }
  return {best, best_f};
}

struct OracleInstance {
  std::vector<Position> src_pos;
  std::vector<double> src_mass;
  Position sink_pos;
};

OracleInstance oracle_instance(const TransportProblem& p) {
  if (!validate_problem(p).empty())
    throw Infeasible("oracle requires a well-formed balanced problem");
  if (p.source.atoms.size() > 3 || p.sink.atoms.size() != 1)
    throw TooLarge("oracle handles at most 3 sources and exactly 1 sink");
  for (const Atom& a : p.source.atoms)
    if (a.pos.size() != 2) throw TooLarge("oracle is planar");
  if (p.sink.atoms.front().pos.size() != 2) throw TooLarge("oracle is planar");
  OracleInstance inst;
  for (const Atom& a : p.source.atoms) {
    inst.src_pos.push_back(a.pos);
    inst.src_mass.push_back(a.mass);
  }
  inst.sink_pos = p.sink.atoms.front().pos;
  return inst;
}

}  // namespace

double oracle_final_cell(const TransportProblem& p, const OracleConfig& cfg) {
  const OracleInstance inst = oracle_instance(p);
  std::vector<Position> pts = inst.src_pos;
  pts.push_back(inst.sink_pos);
  double span = padded_bbox(pts).span();
  for (int r = 0; r < cfg.refinement_rounds; ++r) span *= 0.25;
  return span / (std::max(cfg.grid_resolution, 8) - 1);
}

OptimizeResult oracle_best(const TransportProblem& p, const OracleConfig& cfg) {
  const OracleInstance inst = oracle_instance(p);
  const CostParams& params = p.params;
  const double c = params.capacity;
  const double ca = std::pow(c, params.alpha);
  const size_t k = inst.src_pos.size();

  // Per-source full-channel splits: theta_i straight channels plus a
  // residual routed through the chosen topology. Enumeration stays desk
  // scale, so the total channel count is capped.
  double total_mass_units = 0.0;
  for (double m : inst.src_mass) total_mass_units += m;
  if (h_parts(total_mass_units, params).whole >
      static_cast<double>(cfg.max_corridor_units))
    throw TooLarge("corridor split enumeration exceeds the channel cap");
  std::vector<int> max_units(k);
  for (size_t i = 0; i < k; ++i)
    max_units[i] = std::min<int>(
        static_cast<int>(h_parts(inst.src_mass[i], params).whole),
        cfg.max_corridor_units);

  struct Candidate {
    std::vector<int> theta;
    bool junction = false;
    Position t;
    double cost = std::numeric_limits<double>::infinity();
  };
  Candidate best;
  double direct_unsplit = std::numeric_limits<double>::infinity();

  std::vector<int> theta(k, 0);
  while (true) {
    double corridor_cost = 0.0;
    std::vector<Position> rpos;
    std::vector<double> rmass;
    for (size_t i = 0; i < k; ++i) {
      corridor_cost +=
          ca * theta[i] * distance(inst.src_pos[i], inst.sink_pos);
      const double res = inst.src_mass[i] - theta[i] * c;
      if (res > c * params.int_snap) {
        rpos.push_back(inst.src_pos[i]);
        rmass.push_back(res);
      }
    }

    double direct = corridor_cost;
    for (size_t i = 0; i < rpos.size(); ++i)
      direct += ca * h_value(rmass[i], params) * distance(rpos[i], inst.sink_pos);
    if (direct < best.cost) best = {theta, false, {}, direct};
    if (std::all_of(theta.begin(), theta.end(), [](int t) { return t == 0; }))
      direct_unsplit = direct;

    if (rpos.size() >= 2) {
      std::vector<double> rates;
      double rsum = 0.0;
      for (double m : rmass) {
        rates.push_back(ca * h_value(m, params));
        rsum += m;
      }
      const double rate_out = ca * h_value(rsum, params);
      std::vector<Position> terminals = rpos;
      terminals.push_back(inst.sink_pos);
      auto f = [&](const Position& t) {
        for (const Position& q : terminals)
          if (distance(q, t) <= 1e-9)
            return std::numeric_limits<double>::infinity();
        double v = corridor_cost + rate_out * distance(inst.sink_pos, t);
        for (size_t i = 0; i < rpos.size(); ++i)
          v += rates[i] * distance(rpos[i], t);
        return v;
      };
      auto [t, v] = grid_minimize(padded_bbox(terminals),
                                  std::max(cfg.grid_resolution, 8),
                                  cfg.refinement_rounds, f);
      if (v < best.cost) best = {theta, true, t, v};
    }

    // next split vector
    size_t i = 0;
    for (; i < k; ++i) {
      if (theta[i] < max_units[i]) {
        ++theta[i];
        break;
      }
      theta[i] = 0;
    }
    if (i == k) break;
  }

  GraphBuilder builder;
  std::vector<double> residual(k);
  for (size_t i = 0; i < k; ++i) {
    builder.segment(inst.src_pos[i], inst.sink_pos, best.theta[i] * c);
    residual[i] = inst.src_mass[i] - best.theta[i] * c;
  }
  if (best.junction) {
    double rsum = 0.0;
    for (size_t i = 0; i < k; ++i) {
      if (residual[i] <= c * params.int_snap) continue;
      builder.segment(inst.src_pos[i], best.t, residual[i]);
      rsum += residual[i];
    }
    builder.segment(best.t, inst.sink_pos, rsum);
  } else {
    for (size_t i = 0; i < k; ++i)
      builder.segment(inst.src_pos[i], inst.sink_pos,
                      residual[i] > c * params.int_snap ? residual[i] : 0.0);
  }

  OptimizeResult out;
  out.graph = builder.take();
  out.cost = m_alpha_c(out.graph, params).total;
  out.trace.push_back({"oracle", direct_unsplit, out.cost});
  return out;
}

namespace {

constexpr double kImproveTol = 1e-12;

bool is_boundary_pos(const Position& pos, const TransportProblem& p) {
  for (const Atom& a : p.source.atoms)
    if (same_position(a.pos, pos)) return true;
  for (const Atom& a : p.sink.atoms)
    if (same_position(a.pos, pos)) return true;
  return false;
}

// Applies one V-to-Y rewrite: edges (a->v, b->v) become (a->t, b->t, t->v),
// or the mirrored version for a shared tail. A junction point landing on a
// terminal degenerates to the corresponding pass-through shape.
void apply_junction_split(TransportGraph& g, int v_id, const Edge ea,
                          const Edge eb, bool shared_head, const Position& t) {
  std::vector<Edge> kept;
  for (const Edge& e : g.edges)
    if (e.id != ea.id && e.id != eb.id) kept.push_back(e);
  g.edges = std::move(kept);

  const int a_id = shared_head ? ea.tail : ea.head;
  const int b_id = shared_head ? eb.tail : eb.head;
  const Position a_pos = g.vertex_by_id(a_id)->pos;
  const Position b_pos = g.vertex_by_id(b_id)->pos;
  const Position v_pos = g.vertex_by_id(v_id)->pos;
  const double wa = ea.weight;
  const double wb = eb.weight;

  int next_eid = 0;
  for (const Edge& e : g.edges) next_eid = std::max(next_eid, e.id + 1);
  auto add_edge = [&](int tail, int head, double w) {
    if (tail == head || w <= kWeightTol) return;
    g.edges.push_back({next_eid++, tail, head, w});
  };

  int t_id;
  if (same_position(t, a_pos)) {
    t_id = a_id;
  } else if (same_position(t, b_pos)) {
    t_id = b_id;
  } else if (same_position(t, v_pos)) {
    t_id = v_id;
  } else {
    t_id = 0;
    for (const Vertex& v : g.vertices) t_id = std::max(t_id, v.id + 1);
    g.vertices.push_back({t_id, t});
  }

  if (shared_head) {
    add_edge(a_id, t_id, wa);
    add_edge(b_id, t_id, wb);
    add_edge(t_id, v_id, wa + wb);
  } else {
    add_edge(v_id, t_id, wa + wb);
    add_edge(t_id, a_id, wa);
    add_edge(t_id, b_id, wb);
  }
}

// Local junction improvement of the sub-capacity part: relocates interior
// degree-3 vertices to their weighted Fermat point and merges same-direction
// edge pairs at a vertex into a Y when that lowers the cost.
bool junction_pass(TransportGraph& g, const TransportProblem& p,
                   const CostParams& params) {
  const double ca = std::pow(params.capacity, params.alpha);
  bool changed = false;
  const size_t cap = g.edges.size() * g.edges.size() + 16;
  for (size_t round = 0; round < cap; ++round) {
    bool moved = false;

    for (const Vertex& v : g.vertices) {
      if (is_boundary_pos(v.pos, p)) continue;
      // Only vertices with zero net flow inside this part may move; anything
      // else is a boundary point of the part (the complementary part or the
      // problem data drains the difference at this exact position).
      std::vector<const Edge*> incident;
      double net = 0.0;
      for (const Edge& e : g.edges) {
        if (e.tail == v.id) {
          incident.push_back(&e);
          net += e.weight;
        } else if (e.head == v.id) {
          incident.push_back(&e);
          net -= e.weight;
        }
      }
      if (incident.size() != 3) continue;
      if (std::abs(net) > kMassTol) continue;
      std::array<Position, 3> anchors;
      std::array<double, 3> rates;
      double old_cost = 0.0;
      for (int i = 0; i < 3; ++i) {
        const Edge* e = incident[i];
        const int far = e->tail == v.id ? e->head : e->tail;
        anchors[i] = g.vertex_by_id(far)->pos;
        rates[i] = ca * h_value(e->weight, params);
        old_cost += rates[i] * distance(anchors[i], v.pos);
      }
      try {
        const FermatResult r = weighted_fermat(anchors, rates, 1e-10);
        if (r.cost < old_cost - kImproveTol * std::max(1.0, old_cost) &&
            distance(r.point, v.pos) > kPosTol) {
          for (Vertex& w : g.vertices)
            if (w.id == v.id) w.pos = r.point;
          g = canonicalize(g);
          moved = true;
          break;
        }
      } catch (const NoConvergence&) {
      }
    }
    if (moved) {
      changed = true;
      continue;
    }

    for (const Vertex& v : g.vertices) {
      for (bool shared_head : {true, false}) {
        std::vector<const Edge*> side;
        for (const Edge& e : g.edges)
          if ((shared_head ? e.head : e.tail) == v.id) side.push_back(&e);
        for (size_t i = 0; i < side.size() && !moved; ++i) {
          for (size_t j = i + 1; j < side.size() && !moved; ++j) {
            const Edge ea = *side[i];
            const Edge eb = *side[j];
            const int a_id = shared_head ? ea.tail : ea.head;
            const int b_id = shared_head ? eb.tail : eb.head;
            const Position a_pos = g.vertex_by_id(a_id)->pos;
            const Position b_pos = g.vertex_by_id(b_id)->pos;
            const double ka = ca * h_value(ea.weight, params);
            const double kb = ca * h_value(eb.weight, params);
            const double kc = ca * h_value(ea.weight + eb.weight, params);
            const double old_cost =
                ka * distance(a_pos, v.pos) + kb * distance(b_pos, v.pos);
            try {
              const FermatResult r = weighted_fermat(
                  {a_pos, b_pos, v.pos}, {ka, kb, kc}, 1e-10);
              if (r.cost < old_cost - kImproveTol * std::max(1.0, old_cost) &&
                  !same_position(r.point, v.pos)) {
                apply_junction_split(g, v.id, ea, eb, shared_head, r.point);
                g = canonicalize(g);
                moved = true;
              }
            } catch (const NoConvergence&) {
            }
          }
        }
        if (moved) break;
      }
      if (moved) break;
    }
    if (!moved) break;
    changed = true;
  }
  return changed;
}

}  // namespace

OptimizeResult optimize(const std::optional<TransportGraph>& g0,
                        const TransportProblem& p, const CostParams& params) {
  if (!validate_problem(p).empty())
    throw Infeasible("optimize requires a well-formed balanced problem");
  TransportGraph g = g0 ? canonicalize(*g0) : star_graph(p);
  try {
    if (!check_balance(g, p).ok())
      throw Infeasible("initial graph does not balance the problem");
  } catch (const MissingBoundaryVertex&) {
    throw Infeasible("initial graph misses a boundary vertex");
  }

  OptimizeResult out;
  double cost = m_alpha_c(g, params).total;
  auto accept = [&](const char* pass, TransportGraph candidate) {
    const double cand_cost = m_alpha_c(candidate, params).total;
    if (cand_cost < cost - kImproveTol * std::max(1.0, cost)) {
      out.trace.push_back({pass, cost, cand_cost});
      g = std::move(candidate);
      cost = cand_cost;
      return true;
    }
    return false;
  };

  const int kMaxPasses = 50;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const double start_cost = cost;

    Decomposition d = decompose(g, params);
    accept("decompose", canonicalize(add_graphs(d.t1, d.t2)));

    for (size_t guard = 0; guard < g.edges.size() + 1; ++guard) {
      bool improved = false;
      for (const std::vector<int>& path : find_integer_corridors(g, params)) {
        if (path.size() < 3) continue;
        if (accept("straighten", straighten_integer_corridor(g, path, params))) {
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }

    d = decompose(g, params);
    TransportGraph t2 = d.t2;
    if (junction_pass(t2, p, params))
      accept("junction", canonicalize(add_graphs(d.t1, t2)));

    if (cost > start_cost - 1e-12) break;
  }

  out.graph = std::move(g);
  out.cost = cost;
  return out;
}

}  // namespace branchflow
