#pragma once

#include <string>
#include <vector>

#include "branchflow/graph.hpp"
#include "branchflow/params.hpp"

namespace branchflow {

// Inequality checks tolerate this much relative slack for rounding.
constexpr double kIneqTol = 1e-9;

/// M_alpha(g) = sum over edges of weight^alpha * length. Evaluated on the
/// canonical form, so parallel-edge representations of the same current agree.
double m_alpha(const TransportGraph& g, double alpha);

/// M(g) = sum of weight * length.
double mass(const TransportGraph& g);

/// H^1 measure of the support: total length over distinct segments.
double support_size(const TransportGraph& g);

struct EdgeCost {
  int edge_id = 0;
  double integer_part = 0.0;     // c^alpha * floor(w/c) * length
  double fractional_part = 0.0;  // c^alpha * frac(w/c)^alpha * length
};

struct CostBreakdown {
  double total = 0.0;
  std::vector<EdgeCost> per_edge;  // ids refer to the canonical form
};

/// Capacity-aware cost: total = c^alpha * sum over edges of
/// H_{1,alpha}(w/c) * length, split per edge into the linear contribution of
/// full channels and the concave contribution of the remainder.
CostBreakdown m_alpha_c(const TransportGraph& g, const CostParams& params);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double slack() const { return rhs - lhs; }
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  bool all_pass = true;
};

/// Evaluates the three inequality families on the inputs:
///  - subadditivity  M_{a,c}(g1+g2) <= M_{a,c}(g1) + M_{a,c}(g2)
///  - mass bounds    M(g) <= c^{1-a} M_{a,c}(g) <= M(g) + c*size(g), for g1, g2
///  - scalar rule    M_{a,c}(h*g1) <= h^a M_{a,c}(g1) for h <= 1, reversed for h >= 1
InequalityReport verify_inequalities(const TransportGraph& g1,
                                     const TransportGraph& g2,
                                     const CostParams& params, double h);

}  // namespace branchflow
