#pragma once

#include <string>
#include <vector>

#include "branchflow/params.hpp"

namespace branchflow {

// Positions closer than this are one point; relative tolerance for mass
// balance checks.
constexpr double kPosTol = 1e-9;
constexpr double kMassTol = 1e-9;

using Position = std::vector<double>;

double distance(const Position& a, const Position& b);
bool same_position(const Position& a, const Position& b, double tol = kPosTol);
bool position_less(const Position& a, const Position& b);

struct Atom {
  Position pos;
  double mass = 0.0;
};

/// Finite weighted sum of point masses. Kept sorted lexicographically by
/// position (canonical form) when built through make_measure.
struct AtomicMeasure {
  std::vector<Atom> atoms;
};

AtomicMeasure make_measure(std::vector<Atom> atoms);

double total_mass(const AtomicMeasure& m);

struct TransportProblem {
  AtomicMeasure source;
  AtomicMeasure sink;
  CostParams params;
};

struct Violation {
  std::string what;
};

/// Checks measure invariants (positive masses, distinct positions) and the
/// source/sink mass balance. Violations are data, not failures; an empty
/// report means the problem is well formed.
std::vector<Violation> validate_problem(const TransportProblem& p);

}  // namespace branchflow
