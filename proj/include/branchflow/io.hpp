#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "branchflow/cycles.hpp"
#include "branchflow/search.hpp"

namespace branchflow {

/// On-disk problem description: version 1, cost parameters, boundary
/// measures, and an optional embedded graph.
struct ProblemFile {
  int version = 1;
  CostParams params;
  AtomicMeasure source;
  AtomicMeasure sink;
  std::optional<TransportGraph> graph;
};

nlohmann::json measure_to_json(const AtomicMeasure& m);
AtomicMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const TransportGraph& g);
TransportGraph graph_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const ProblemFile& f);
ProblemFile problem_from_json(const nlohmann::json& j);

/// Parses a problem file; throws ParseError on malformed JSON or schema
/// violations (unknown version, alpha outside [0,1], capacity <= 0,
/// non-finite numbers, bad edge references).
ProblemFile load_problem(const std::string& path);

nlohmann::json breakdown_to_json(const CostBreakdown& b);
nlohmann::json balance_to_json(const BalanceReport& r);
nlohmann::json certificate_to_json(const DecompositionCertificate& c);
nlohmann::json optimize_result_to_json(const OptimizeResult& r,
                                       bool include_graph = true);

}  // namespace branchflow
