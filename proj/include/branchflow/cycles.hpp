#pragma once

#include <optional>
#include <string>
#include <vector>

#include "branchflow/cost.hpp"

namespace branchflow {

/// A closed walk in the undirected support. sign = +1 where the walk runs
/// with the edge direction (set N1), -1 against it (set N2).
struct CycleEdge {
  int edge_id = 0;
  int sign = +1;
};

struct Cycle {
  std::vector<CycleEdge> edges;
  double aligned_length = 0.0;  // total length of sign=+1 edges
  double anti_length = 0.0;     // total length of sign=-1 edges
};

/// Reversed traversal: same edge set, negated signs.
Cycle flip_cycle(const Cycle& cy);

/// Some cycle of the undirected support found by depth-first search from the
/// lowest vertex id, or nullopt. Parallel edges between the same endpoints
/// share one support segment and do not form a cycle by themselves.
std::optional<Cycle> find_cycle(const TransportGraph& g);

bool is_cycle_free(const TransportGraph& g);

/// One cycle per non-tree edge of a DFS forest, in discovery order.
std::vector<Cycle> fundamental_cycles(const TransportGraph& g);

/// Moves n0 full channels of weight around the cycle: orients the cycle so
/// the aligned side is not longer than the anti-aligned side, takes n0 as the
/// minimum channel count floor(w/c) over the anti-aligned side, then adds
/// n0*c on aligned edges and removes n0*c on anti-aligned ones. The cost
/// changes by c^alpha * n0 * (aligned - anti length) <= 0 and at least one
/// edge loses all full channels. Throws PreconditionUnmet when no admissible
/// orientation has n0 >= 1.
TransportGraph reduce_integer_cycle(const TransportGraph& g, const Cycle& cy,
                                    const CostParams& params);

/// Moves the minimal sub-capacity remainder around the cycle, in the
/// orientation with non-positive first derivative of the cost; concavity then
/// guarantees the cost does not increase and one edge's remainder reaches
/// zero. Requires max + min of the remainders over the cycle to stay within
/// one capacity (and the shift must not push any edge past c); otherwise
/// throws PreconditionUnmet. A cycle whose minimal remainder is already zero
/// is returned unchanged.
TransportGraph reduce_fractional_cycle(const TransportGraph& g, const Cycle& cy,
                                       const CostParams& params);

struct SkippedCycle {
  std::vector<int> edge_ids;
  std::string reason;
};

struct DecompositionCertificate {
  double cost_t1 = 0.0;
  double cost_t2 = 0.0;
  double cost_sum = 0.0;       // cost_t1 + cost_t2
  double cost_combined = 0.0;  // cost of t1 + t2 as one current
  double cost_original = 0.0;
  bool t1_integer_multiples = false;
  bool t2_within_capacity = false;
  bool boundary_preserved = false;
  bool t1_cycle_free = false;
  bool t2_cycle_free = false;
  std::vector<SkippedCycle> unreduced;
};

struct Decomposition {
  TransportGraph t1;  // every weight an integer multiple of c
  TransportGraph t2;  // every weight <= c
  DecompositionCertificate certificate;
};

/// Splits the path into full-channel and remainder parts edge by edge, then
/// runs integer cycle reductions on the first part and fractional ones on the
/// second until both are cycle-free or every remaining cycle fails its
/// precondition (those are reported in the certificate, never forced).
Decomposition decompose(const TransportGraph& g, const CostParams& params);

}  // namespace branchflow
