#pragma once

#include <vector>

#include "branchflow/measures.hpp"

namespace branchflow {

// Merged edge weights with magnitude at or below this are dropped; they are
// cancellation residue, not flow.
constexpr double kWeightTol = 1e-12;

struct Vertex {
  int id = 0;
  Position pos;
};

struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;
  double weight = 0.0;
};

/// Embedded weighted directed multigraph with straight-line edges; the
/// discrete transport path. Edge weights are strictly positive; an edge with
/// negative weight means the same flow with tail and head swapped.
struct TransportGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  const Vertex* vertex_by_id(int id) const;
  const Edge* edge_by_id(int id) const;
  /// Index of the vertex at `pos` within `tol`, or -1.
  int vertex_at(const Position& pos, double tol = kPosTol) const;
  double edge_length(const Edge& e) const;
  int dim() const;
  bool empty() const { return edges.empty(); }
};

/// Sum of two paths as currents. Edges sharing the same unordered endpoint
/// pair merge: aligned weights add, opposite weights cancel and the survivor
/// keeps the dominant direction; everything else is concatenated. Vertex sets
/// are unioned by position.
TransportGraph add_graphs(const TransportGraph& g1, const TransportGraph& g2);

/// Scales every weight by h. Negative h flips all edge directions; h = 0
/// yields the empty graph.
TransportGraph scale_graph(const TransportGraph& g, double h);

/// Canonical form: merges parallel edges, drops zero-weight edges and
/// isolated vertices, sorts vertices lexicographically by position and edges
/// by endpoints, renumbers ids densely. Idempotent.
TransportGraph canonicalize(const TransportGraph& g);

bool graphs_identical(const TransportGraph& a, const TransportGraph& b);
/// Canonical comparison with weight tolerance; positions must match within
/// kPosTol.
bool graphs_close(const TransportGraph& a, const TransportGraph& b,
                  double weight_tol = 1e-9);

struct BalanceReport {
  struct Entry {
    int vertex_id = 0;
    double residual = 0.0;
  };
  std::vector<Entry> entries;
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  bool ok() const { return max_abs_residual <= tolerance; }
};

/// Net outflow residual per vertex against the problem boundary:
/// residual(v) = sum of outgoing weights - sum of incoming weights
///             - source mass at v + sink mass at v.
/// All residuals vanish exactly when g transports source to sink.
/// Throws MissingBoundaryVertex if an atom position matches no vertex.
BalanceReport check_balance(const TransportGraph& g, const TransportProblem& p);

/// Net outflow per vertex position (no boundary data); the discrete boundary
/// of the path as (position, flow) pairs with nonzero flow.
std::vector<std::pair<Position, double>> boundary_flows(const TransportGraph& g);

}  // namespace branchflow
