#pragma once

#include <string>

#include "branchflow/cost.hpp"

namespace branchflow {

struct RenderSpec {
  enum class Stroke { kWeight, kHValue };
  Stroke stroke = Stroke::kWeight;
  int canvas = 800;  // pixels, square
  bool labels = false;
  CostParams params;  // used by the h-value stroke mode
};

/// Deterministic SVG of a planar graph: one line per edge in id order with an
/// arrowhead, stroke width 1 + 4 * quantity / max quantity, optional weight
/// labels. Byte-identical output for identical inputs.
/// Throws UnsupportedDimension unless the graph is two-dimensional.
std::string render_svg(const TransportGraph& g, const RenderSpec& spec);

}  // namespace branchflow
