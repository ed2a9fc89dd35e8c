#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "branchflow/cost.hpp"

namespace branchflow {

struct GraphGenOptions {
  int dim = 2;
  int min_vertices = 3;
  int max_vertices = 8;
  int extra_edges = 3;      // chords beyond the spanning tree, 0..extra_edges
  bool force_cyclic = false;
  double coord_span = 10.0;
  double weight_min = 0.05;
  double weight_max = 5.0;
  std::optional<double> weight_cap;  // clamp weights at this value
};

/// Random embedded graph: distinct vertex positions, a random spanning tree
/// plus optional chords, positive weights, no parallel edges.
TransportGraph random_graph(std::mt19937_64& rng, const GraphGenOptions& opts);

/// Random cyclic graph whose weights are n*c + r with remainders r in
/// {0} union [0.05c, 0.5c], so every cycle satisfies the remainder
/// max + min <= c hypothesis of the fractional reduction.
TransportGraph random_cyclic_safe(std::mt19937_64& rng, double capacity);

/// A second graph sharing part of g1's support, for subadditivity trials.
TransportGraph random_overlapping(std::mt19937_64& rng,
                                  const TransportGraph& g1,
                                  const GraphGenOptions& opts);

struct FamilyResult {
  std::string name;
  long trials = 0;
  long violations = 0;
  double worst = 0.0;          // most negative slack seen
  std::string counterexample;  // JSON of the first violating instance
};

struct VerifyReport {
  std::vector<FamilyResult> families;
  bool all_pass = true;
};

/// Randomized inequality suites: the H chain and H subadditivity /
/// monotonicity / scale identity, graph-level subadditivity, the two-sided
/// mass bound, both scalar-multiple branches on the h grids
/// {0,0.1,...,1} and {1,1.5,2,4,8}, multi-path domination, the capacity
/// limit along a doubling sequence, and the small-capacity blowup bound.
/// Fixed alpha/capacity override the per-trial sampling when given.
VerifyReport run_verify_suites(long trials, std::uint64_t seed,
                               std::optional<double> alpha = {},
                               std::optional<double> capacity = {});

}  // namespace branchflow
