#include "branchflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace branchflow {

const Vertex* TransportGraph::vertex_by_id(int id) const {
  for (const Vertex& v : vertices)
    if (v.id == id) return &v;
  return nullptr;
}

const Edge* TransportGraph::edge_by_id(int id) const {
  for (const Edge& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

int TransportGraph::vertex_at(const Position& pos, double tol) const {
  for (size_t i = 0; i < vertices.size(); ++i)
    if (same_position(vertices[i].pos, pos, tol)) return static_cast<int>(i);
  return -1;
}

double TransportGraph::edge_length(const Edge& e) const {
  const Vertex* a = vertex_by_id(e.tail);
  const Vertex* b = vertex_by_id(e.head);
  if (!a || !b) throw std::invalid_argument("edge references missing vertex");
  return distance(a->pos, b->pos);
}

int TransportGraph::dim() const {
  return vertices.empty() ? 0 : static_cast<int>(vertices.front().pos.size());
}

namespace {

// Signed weight on the unordered endpoint pair (a,b) with a < b; positive
// means flow a -> b.
using PairFlows = std::map<std::pair<int, int>, double>;

void accumulate(PairFlows& flows, int tail, int head, double w) {
  if (tail == head) return;  // merged endpoints carry no segment
  if (tail < head)
    flows[{tail, head}] += w;
  else
    flows[{head, tail}] -= w;
}

std::vector<Edge> flows_to_edges(const PairFlows& flows) {
  std::vector<Edge> edges;
  int id = 0;
  for (const auto& [key, s] : flows) {
    if (std::abs(s) <= kWeightTol) continue;
    Edge e;
    e.id = id++;
    if (s > 0) {
      e.tail = key.first;
      e.head = key.second;
      e.weight = s;
    } else {
      e.tail = key.second;
      e.head = key.first;
      e.weight = -s;
    }
    edges.push_back(e);
  }
  return edges;
}

}  // namespace

TransportGraph add_graphs(const TransportGraph& g1, const TransportGraph& g2) {
  if (!g1.vertices.empty() && !g2.vertices.empty() && g1.dim() != g2.dim())
    throw std::invalid_argument("add_graphs: dimension mismatch");

  TransportGraph out;
  std::map<int, int> map1, map2;
  for (const Vertex& v : g1.vertices) {
    const int id = static_cast<int>(out.vertices.size());
    map1[v.id] = id;
    out.vertices.push_back({id, v.pos});
  }
  for (const Vertex& v : g2.vertices) {
    const int at = out.vertex_at(v.pos);
    if (at >= 0) {
      map2[v.id] = out.vertices[at].id;
    } else {
      const int id = static_cast<int>(out.vertices.size());
      map2[v.id] = id;
      out.vertices.push_back({id, v.pos});
    }
  }

  PairFlows flows;
  for (const Edge& e : g1.edges)
    accumulate(flows, map1.at(e.tail), map1.at(e.head), e.weight);
  for (const Edge& e : g2.edges)
    accumulate(flows, map2.at(e.tail), map2.at(e.head), e.weight);
  out.edges = flows_to_edges(flows);
  return out;
}

TransportGraph scale_graph(const TransportGraph& g, double h) {
  if (h == 0.0) return {};
  TransportGraph out = g;
  for (Edge& e : out.edges) {
    e.weight *= std::abs(h);
    if (h < 0.0) std::swap(e.tail, e.head);
  }
  return out;
}

TransportGraph canonicalize(const TransportGraph& g) {
  // Merge coincident vertices first so duplicate positions collapse and any
  // edge between them disappears with them.
  std::map<int, int> rep;  // original id -> representative original id
  std::vector<const Vertex*> reps;
  for (const Vertex& v : g.vertices) {
    int found = -1;
    for (const Vertex* r : reps) {
      if (same_position(r->pos, v.pos)) {
        found = r->id;
        break;
      }
    }
    if (found < 0) {
      reps.push_back(&v);
      rep[v.id] = v.id;
    } else {
      rep[v.id] = found;
    }
  }

  PairFlows flows;
  for (const Edge& e : g.edges)
    accumulate(flows, rep.at(e.tail), rep.at(e.head), e.weight);

  // Keep only vertices touched by surviving edges, ordered by position.
  std::vector<const Vertex*> used;
  for (const auto& [key, s] : flows) {
    if (std::abs(s) <= kWeightTol) continue;
    for (int id : {key.first, key.second}) {
      const Vertex* v = g.vertex_by_id(id);
      if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
    }
  }
  std::sort(used.begin(), used.end(), [](const Vertex* a, const Vertex* b) {
    return position_less(a->pos, b->pos);
  });

  TransportGraph out;
  std::map<int, int> renumber;
  for (const Vertex* v : used) {
    const int id = static_cast<int>(out.vertices.size());
    renumber[v->id] = id;
    out.vertices.push_back({id, v->pos});
  }
  PairFlows renumbered;
  for (const auto& [key, s] : flows) {
    if (std::abs(s) <= kWeightTol) continue;
    const int a = renumber.at(key.first);
    const int b = renumber.at(key.second);
    if (a < b)
      renumbered[{a, b}] += s;
    else
      renumbered[{b, a}] -= s;
  }
  out.edges = flows_to_edges(renumbered);
  return out;
}

bool graphs_identical(const TransportGraph& a, const TransportGraph& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size())
    return false;
  for (size_t i = 0; i < a.vertices.size(); ++i) {
    if (a.vertices[i].id != b.vertices[i].id || a.vertices[i].pos != b.vertices[i].pos)
      return false;
  }
  for (size_t i = 0; i < a.edges.size(); ++i) {
    const Edge &ea = a.edges[i], &eb = b.edges[i];
    if (ea.id != eb.id || ea.tail != eb.tail || ea.head != eb.head ||
        ea.weight != eb.weight)
      return false;
  }
  return true;
}

bool graphs_close(const TransportGraph& a, const TransportGraph& b,
                  double weight_tol) {
  const TransportGraph ca = canonicalize(a);
  const TransportGraph cb = canonicalize(b);
  if (ca.vertices.size() != cb.vertices.size() || ca.edges.size() != cb.edges.size())
    return false;
  for (size_t i = 0; i < ca.vertices.size(); ++i)
    if (!same_position(ca.vertices[i].pos, cb.vertices[i].pos)) return false;
  for (size_t i = 0; i < ca.edges.size(); ++i) {
    const Edge &ea = ca.edges[i], &eb = cb.edges[i];
    if (ea.tail != eb.tail || ea.head != eb.head) return false;
    if (std::abs(ea.weight - eb.weight) > weight_tol) return false;
  }
  return true;
}

BalanceReport check_balance(const TransportGraph& g, const TransportProblem& p) {
  std::vector<double> boundary(g.vertices.size(), 0.0);
  auto locate = [&](const Atom& a, double sign) {
    const int at = g.vertex_at(a.pos);
    if (at < 0)
      throw MissingBoundaryVertex("boundary atom matches no graph vertex");
    boundary[at] += sign * a.mass;
  };
  for (const Atom& a : p.source.atoms) locate(a, +1.0);
  for (const Atom& a : p.sink.atoms) locate(a, -1.0);

  std::map<int, size_t> index;
  for (size_t i = 0; i < g.vertices.size(); ++i) index[g.vertices[i].id] = i;

  std::vector<double> net(g.vertices.size(), 0.0);
  for (const Edge& e : g.edges) {
    net[index.at(e.tail)] += e.weight;
    net[index.at(e.head)] -= e.weight;
  }

  BalanceReport report;
  report.tolerance =
      kMassTol * std::max(1.0, std::max(total_mass(p.source), total_mass(p.sink)));
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    const double r = net[i] - boundary[i];
    report.entries.push_back({g.vertices[i].id, r});
    report.max_abs_residual = std::max(report.max_abs_residual, std::abs(r));
  }
  return report;
}

std::vector<std::pair<Position, double>> boundary_flows(const TransportGraph& g) {
  std::map<int, double> net;
  for (const Edge& e : g.edges) {
    net[e.tail] += e.weight;
    net[e.head] -= e.weight;
  }
  std::vector<std::pair<Position, double>> out;
  for (const auto& [id, flow] : net) {
    if (std::abs(flow) <= kWeightTol) continue;
    out.emplace_back(g.vertex_by_id(id)->pos, flow);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return position_less(a.first, b.first);
  });
  return out;
}

}  // namespace branchflow
