#pragma once

#include <optional>
#include <string>

#include "branchflow/cycles.hpp"
#include "branchflow/geometry.hpp"

namespace branchflow {

struct OracleConfig {
  int grid_resolution = 64;   // >= 8
  int refinement_rounds = 4;  // window shrinks by 0.25 per round
  int max_corridor_units = 16;
};

struct TraceEntry {
  std::string pass;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

struct OptimizeResult {
  TransportGraph graph;
  double cost = 0.0;
  std::vector<TraceEntry> trace;
};

/// Proportional star: every source connected straight to every sink, with
/// weight m_i * n_j / total. Always balances a well-formed problem.
TransportGraph star_graph(const TransportProblem& p);

/// Brute-force ground truth for planar instances with at most 3 sources and
/// one sink. Enumerates direct stars, a single free junction, and integer
/// corridor splits per source; junction positions are located by grid search
/// over the padded terminal bounding box plus refinement rounds.
/// Throws TooLarge beyond those limits.
OptimizeResult oracle_best(const TransportProblem& p,
                           const OracleConfig& cfg = {});

/// Side length of the final refinement cell, for grid-accuracy bounds.
double oracle_final_cell(const TransportProblem& p, const OracleConfig& cfg);

/// Heuristic pipeline: alternates decomposition, corridor straightening and
/// local junction improvement of the sub-capacity part until the cost stops
/// improving (or 50 passes). Starts from g0 when given (must balance), else
/// from the proportional star. The trace of accepted passes is non-increasing
/// in cost.
OptimizeResult optimize(const std::optional<TransportGraph>& g0,
                        const TransportProblem& p, const CostParams& params);

}  // namespace branchflow
