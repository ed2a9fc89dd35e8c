#include "branchflow/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace branchflow {

using nlohmann::json;

namespace {

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + ": non-finite value");
  return v;
}

Position position_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("pos: expected a non-empty array");
  Position p;
  for (const json& x : j) p.push_back(finite_number(x, "pos"));
  return p;
}

}  // namespace

json measure_to_json(const AtomicMeasure& m) {
  json out = json::array();
  for (const Atom& a : m.atoms) out.push_back({{"pos", a.pos}, {"mass", a.mass}});
  return out;
}

AtomicMeasure measure_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("measure: expected an array of atoms");
  std::vector<Atom> atoms;
  for (const json& a : j) {
    if (!a.is_object() || !a.contains("pos") || !a.contains("mass"))
      throw ParseError("atom: expected {\"pos\": [...], \"mass\": ...}");
    atoms.push_back({position_from_json(a.at("pos")),
                     finite_number(a.at("mass"), "mass")});
  }
  return make_measure(std::move(atoms));
}

json graph_to_json(const TransportGraph& g) {
  json vertices = json::array();
  for (const Vertex& v : g.vertices)
    vertices.push_back({{"id", v.id}, {"pos", v.pos}});
  json edges = json::array();
  for (const Edge& e : g.edges)
    edges.push_back({{"id", e.id},
                     {"tail", e.tail},
                     {"head", e.head},
                     {"weight", e.weight}});
  return {{"vertices", vertices}, {"edges", edges}};
}

TransportGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("graph: expected an object");
  TransportGraph g;
  std::set<int> ids;
  for (const json& v : j.value("vertices", json::array())) {
    Vertex vertex;
    vertex.id = v.at("id").get<int>();
    vertex.pos = position_from_json(v.at("pos"));
    if (!ids.insert(vertex.id).second)
      throw ParseError("graph: duplicate vertex id");
    g.vertices.push_back(std::move(vertex));
  }
  if (!g.vertices.empty()) {
    const size_t d = g.vertices.front().pos.size();
    for (const Vertex& v : g.vertices)
      if (v.pos.size() != d) throw ParseError("graph: mixed vertex dimensions");
    for (size_t i = 0; i < g.vertices.size(); ++i)
      for (size_t k = i + 1; k < g.vertices.size(); ++k)
        if (same_position(g.vertices[i].pos, g.vertices[k].pos))
          throw ParseError("graph: duplicate vertex position");
  }
  int next_id = 0;
  for (const json& e : j.value("edges", json::array())) {
    Edge edge;
    edge.id = e.contains("id") ? e.at("id").get<int>() : next_id;
    edge.tail = e.at("tail").get<int>();
    edge.head = e.at("head").get<int>();
    edge.weight = finite_number(e.at("weight"), "weight");
    next_id = std::max(next_id, edge.id + 1);
    if (!ids.count(edge.tail) || !ids.count(edge.head))
      throw ParseError("graph: edge references an unknown vertex");
    if (edge.tail == edge.head) throw ParseError("graph: self-loop edge");
    if (edge.weight < 0.0) {  // negative flow means the reversed edge
      std::swap(edge.tail, edge.head);
      edge.weight = -edge.weight;
    }
    if (edge.weight <= kWeightTol) continue;
    g.edges.push_back(edge);
  }
  return g;
}

json problem_to_json(const ProblemFile& f) {
  json out{{"version", f.version},
           {"alpha", f.params.alpha},
           {"capacity", f.params.capacity},
           {"source", measure_to_json(f.source)},
           {"sink", measure_to_json(f.sink)}};
  if (f.graph) out["graph"] = graph_to_json(*f.graph);
  return out;
}

ProblemFile problem_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("problem: expected an object");
  ProblemFile f;
  f.version = j.value("version", 0);
  if (f.version != 1) throw ParseError("problem: unsupported version");
  f.params.alpha = finite_number(j.at("alpha"), "alpha");
  f.params.capacity = finite_number(j.at("capacity"), "capacity");
  if (f.params.alpha < 0.0 || f.params.alpha > 1.0)
    throw ParseError("problem: alpha must lie in [0,1]");
  if (f.params.capacity <= 0.0)
    throw ParseError("problem: capacity must be positive");
  f.source = measure_from_json(j.value("source", json::array()));
  f.sink = measure_from_json(j.value("sink", json::array()));
  if (j.contains("graph") && !j.at("graph").is_null())
    f.graph = graph_from_json(j.at("graph"));
  return f;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return problem_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid problem file: ") + e.what());
  }
}

json breakdown_to_json(const CostBreakdown& b) {
  json per_edge = json::array();
  for (const EdgeCost& e : b.per_edge)
    per_edge.push_back({{"edge", e.edge_id},
                        {"integer", e.integer_part},
                        {"fractional", e.fractional_part}});
  return {{"total", b.total}, {"per_edge", per_edge}};
}

json balance_to_json(const BalanceReport& r) {
  json residuals = json::array();
  for (const auto& e : r.entries)
    residuals.push_back({{"vertex", e.vertex_id}, {"residual", e.residual}});
  return {{"ok", r.ok()},
          {"max_abs_residual", r.max_abs_residual},
          {"tolerance", r.tolerance},
          {"residuals", residuals}};
}

json certificate_to_json(const DecompositionCertificate& c) {
  json unreduced = json::array();
  for (const SkippedCycle& s : c.unreduced)
    unreduced.push_back({{"edges", s.edge_ids}, {"reason", s.reason}});
  return {{"cost_t1", c.cost_t1},
          {"cost_t2", c.cost_t2},
          {"cost_sum", c.cost_sum},
          {"cost_combined", c.cost_combined},
          {"cost_original", c.cost_original},
          {"t1_integer_multiples", c.t1_integer_multiples},
          {"t2_within_capacity", c.t2_within_capacity},
          {"boundary_preserved", c.boundary_preserved},
          {"t1_cycle_free", c.t1_cycle_free},
          {"t2_cycle_free", c.t2_cycle_free},
          {"unreduced_cycles", unreduced}};
}

json optimize_result_to_json(const OptimizeResult& r, bool include_graph) {
  json trace = json::array();
  for (const TraceEntry& t : r.trace)
    trace.push_back(
        {{"pass", t.pass}, {"before", t.cost_before}, {"after", t.cost_after}});
  json out{{"cost", r.cost}, {"trace", trace}};
  if (include_graph) out["graph"] = graph_to_json(r.graph);
  return out;
}

}  // namespace branchflow
