#include "branchflow/cost.hpp"

#include <cmath>

namespace branchflow {

// Costs are properties of the underlying current, so every evaluation runs on
// the canonical form; a multigraph with parallel edges prices the merged
// density, not the representation.

double m_alpha(const TransportGraph& g, double alpha) {
  const TransportGraph c = canonicalize(g);
  double total = 0.0;
  for (const Edge& e : c.edges) total += std::pow(e.weight, alpha) * c.edge_length(e);
  return total;
}

double mass(const TransportGraph& g) {
  const TransportGraph c = canonicalize(g);
  double total = 0.0;
  for (const Edge& e : c.edges) total += e.weight * c.edge_length(e);
  return total;
}

double support_size(const TransportGraph& g) {
  const TransportGraph c = canonicalize(g);
  double total = 0.0;
  for (const Edge& e : c.edges) total += c.edge_length(e);
  return total;
}

CostBreakdown m_alpha_c(const TransportGraph& g, const CostParams& params) {
  const TransportGraph c = canonicalize(g);
  const double ca = std::pow(params.capacity, params.alpha);
  CostBreakdown out;
  for (const Edge& e : c.edges) {
    const double len = c.edge_length(e);
    const HParts parts = h_parts(e.weight, params);
    EdgeCost ec;
    ec.edge_id = e.id;
    ec.integer_part = ca * parts.whole * len;
    ec.fractional_part =
        parts.frac > 0.0 ? ca * std::pow(parts.frac, params.alpha) * len : 0.0;
    out.total += ec.integer_part + ec.fractional_part;
    out.per_edge.push_back(ec);
  }
  return out;
}

namespace {

InequalityCheck make_check(std::string name, double lhs, double rhs) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.pass = lhs <= rhs + kIneqTol * std::max(1.0, std::abs(rhs));
  return c;
}

}  // namespace

InequalityReport verify_inequalities(const TransportGraph& g1,
                                     const TransportGraph& g2,
                                     const CostParams& params, double h) {
  h = std::abs(h);  // a negatively scaled path costs the same as its reversal
  InequalityReport report;
  auto push = [&](InequalityCheck c) {
    report.all_pass = report.all_pass && c.pass;
    report.checks.push_back(std::move(c));
  };

  const double c1 = m_alpha_c(g1, params).total;
  const double c2 = m_alpha_c(g2, params).total;
  const double csum = m_alpha_c(add_graphs(g1, g2), params).total;
  push(make_check("subadditivity", csum, c1 + c2));

  const double scale = std::pow(params.capacity, 1.0 - params.alpha);
  auto mass_bounds = [&](const char* label, const TransportGraph& g, double cost) {
    push(make_check(std::string("mass_lower_") + label, mass(g), scale * cost));
    push(make_check(std::string("mass_upper_") + label, scale * cost,
                    mass(g) + params.capacity * support_size(g)));
  };
  mass_bounds("g1", g1, c1);
  mass_bounds("g2", g2, c2);

  const double scaled = m_alpha_c(scale_graph(g1, h), params).total;
  const double bound = std::pow(h, params.alpha) * c1;
  if (h <= 1.0)
    push(make_check("scalar_multiple_shrink", scaled, bound));
  if (h >= 1.0)
    push(make_check("scalar_multiple_grow", bound, scaled));

  return report;
}

}  // namespace branchflow
