#include "branchflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace branchflow {

double distance(const Position& a, const Position& b) {
  double s = 0.0;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool same_position(const Position& a, const Position& b, double tol) {
  if (a.size() != b.size()) return false;
  return distance(a, b) <= tol;
}

bool position_less(const Position& a, const Position& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

AtomicMeasure make_measure(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return position_less(a.pos, b.pos); });
  return AtomicMeasure{std::move(atoms)};
}

double total_mass(const AtomicMeasure& m) {
  return std::accumulate(m.atoms.begin(), m.atoms.end(), 0.0,
                         [](double s, const Atom& a) { return s + a.mass; });
}

namespace {

void validate_measure(const AtomicMeasure& m, const char* label,
                      std::vector<Violation>& out) {
  for (const Atom& a : m.atoms) {
    if (!(a.mass > 0.0)) {
      out.push_back({std::string(label) + ": nonpositive mass"});
    }
    for (double x : a.pos) {
      if (!std::isfinite(x)) {
        out.push_back({std::string(label) + ": non-finite coordinate"});
        break;
      }
    }
  }
  for (size_t i = 0; i < m.atoms.size(); ++i) {
    for (size_t j = i + 1; j < m.atoms.size(); ++j) {
      if (same_position(m.atoms[i].pos, m.atoms[j].pos)) {
        out.push_back({std::string(label) + ": duplicate atom position"});
      }
    }
  }
  if (!m.atoms.empty()) {
    const size_t d = m.atoms.front().pos.size();
    for (const Atom& a : m.atoms) {
      if (a.pos.size() != d) {
        out.push_back({std::string(label) + ": inconsistent dimension"});
        break;
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate_problem(const TransportProblem& p) {
  std::vector<Violation> out;
  validate_measure(p.source, "source", out);
  validate_measure(p.sink, "sink", out);
  if (!p.source.atoms.empty() && !p.sink.atoms.empty() &&
      p.source.atoms.front().pos.size() != p.sink.atoms.front().pos.size()) {
    out.push_back({"source/sink dimension mismatch"});
  }
  const double ms = total_mass(p.source);
  const double mt = total_mass(p.sink);
  const double tol = kMassTol * std::max(1.0, std::max(ms, mt));
  if (std::abs(ms - mt) > tol) {
    out.push_back({"mass mismatch"});
  }
  if (!params_valid(p.params)) {
    out.push_back({"invalid cost parameters"});
  }
  return out;
}

}  // namespace branchflow
