#pragma once

#include <array>

#include "branchflow/cost.hpp"

namespace branchflow {

/// Two sources feeding one sink through a free junction point in the plane.
struct JunctionProblem {
  Position x1;
  Position x2;
  Position y;
  double m1 = 0.0;
  double m2 = 0.0;
  CostParams params;
};

struct JunctionCoefficients {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

/// Per-length cost rates of the three junction legs:
/// k1 = c^a H(m1/c), k2 = c^a H(m2/c), k3 = c^a H((m1+m2)/c).
/// Subadditivity of H gives k3 <= k1 + k2.
JunctionCoefficients junction_coefficients(const JunctionProblem& p);

struct JunctionSolution {
  Position t;
  double cost = 0.0;
  std::array<double, 3> angles{};  // branch angles, zero when degenerate
  bool degenerate = false;         // t coincides with a terminal
  int degenerate_terminal = -1;    // 0 = x1, 1 = x2, 2 = y
  int iterations = 0;
};

/// Minimizes F(t) = k1|x1-t| + k2|x2-t| + k3|y-t| over the plane by damped
/// Weiszfeld iteration with a gradient-descent fallback. When a terminal
/// already satisfies the one-sided optimality condition the solve returns it
/// with the degenerate flag (V-shape or pass-through); otherwise the interior
/// point with gradient norm <= tol_grad.
JunctionSolution solve_junction(const JunctionProblem& p,
                                double tol_grad = 1e-10);

/// Gradient of F at t (the force imbalance k1*n1 + k2*n2 + k3*n3).
Position junction_gradient(const JunctionProblem& p, const Position& t);

double junction_cost(const JunctionProblem& p, const Position& t);

/// Branch angles from the law of cosines on the rates alone:
///   cos(t1) = (k1^2 + k3^2 - k2^2) / (2 k1 k3),  t2 symmetric,
///   cos(t3) = (k3^2 - k1^2 - k2^2) / (2 k1 k2).
std::array<double, 3> angles_from_coefficients(double k1, double k2, double k3);

struct JunctionAngles {
  std::array<double, 3> from_coefficients{};
  std::array<double, 3> measured{};  // from the leg vectors at t
};

/// Both angle computations; they agree at a converged interior junction.
/// Throws DegenerateJunction when the solution sits on a terminal.
JunctionAngles junction_angles(const JunctionSolution& sol,
                               const JunctionProblem& p);

struct FermatResult {
  Position point;
  double cost = 0.0;
  bool degenerate = false;
  int terminal = -1;
  int iterations = 0;
};

/// Weighted three-point Fermat solve used by solve_junction and by local
/// junction moves with arbitrary per-leg rates.
FermatResult weighted_fermat(const std::array<Position, 3>& anchors,
                             const std::array<double, 3>& rates,
                             double tol_grad, int max_iter = 100000);

/// Reroutes the shared full channels of a directed polyline onto the straight
/// segment between its ends: removes theta0*c along the path and adds theta0*c
/// on the chord, where theta0 is the minimum channel count on the path. The
/// cost changes by exactly c^alpha * theta0 * (chord - path length) <= 0.
/// A path with theta0 = 0 is returned unchanged. Throws PreconditionUnmet
/// when `path` is not a simple directed polyline of g.
TransportGraph straighten_integer_corridor(const TransportGraph& g,
                                           const std::vector<int>& path,
                                           const CostParams& params);

/// Splits theta1 full channels off a directed polyline. Returns (corridor
/// carrying theta1*c, remainder); their costs add up exactly to the original.
/// theta1 must not exceed the minimum channel count along the path.
std::pair<TransportGraph, TransportGraph> separate_corridor(
    const TransportGraph& g, const std::vector<int>& path, int theta1,
    const CostParams& params);

/// Maximal simple directed paths whose every edge carries at least one full
/// channel, grown greedily from each such edge in ascending id order.
/// Returned as vertex id sequences.
std::vector<std::vector<int>> find_integer_corridors(const TransportGraph& g,
                                                     const CostParams& params);

}  // namespace branchflow
