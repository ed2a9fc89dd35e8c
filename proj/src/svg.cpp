#include "branchflow/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace branchflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string render_svg(const TransportGraph& g, const RenderSpec& spec) {
  if (!g.vertices.empty() && g.dim() != 2)
    throw UnsupportedDimension("SVG rendering needs a planar graph");

  double lo_x = 0.0, lo_y = 0.0, hi_x = 1.0, hi_y = 1.0;
  if (!g.vertices.empty()) {
    lo_x = lo_y = std::numeric_limits<double>::infinity();
    hi_x = hi_y = -std::numeric_limits<double>::infinity();
    for (const Vertex& v : g.vertices) {
      lo_x = std::min(lo_x, v.pos[0]);
      hi_x = std::max(hi_x, v.pos[0]);
      lo_y = std::min(lo_y, v.pos[1]);
      hi_y = std::max(hi_y, v.pos[1]);
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double size = spec.canvas;
  const double margin = 0.08 * size;
  const double scale = (size - 2.0 * margin) / span;
  auto map_x = [&](double x) { return margin + (x - lo_x) * scale; };
  auto map_y = [&](double y) { return size - margin - (y - lo_y) * scale; };

  std::vector<const Edge*> edges;
  for (const Edge& e : g.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(),
            [](const Edge* a, const Edge* b) { return a->id < b->id; });

  auto quantity = [&](const Edge& e) {
    return spec.stroke == RenderSpec::Stroke::kWeight
               ? e.weight
               : h_value(e.weight, spec.params);
  };
  double max_q = 0.0;
  for (const Edge* e : edges) max_q = std::max(max_q, quantity(*e));
  if (max_q <= 0.0) max_q = 1.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.canvas
      << "\" height=\"" << spec.canvas << "\" viewBox=\"0 0 " << spec.canvas
      << " " << spec.canvas << "\">\n";
  out << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" "
         "refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
         "orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" "
         "fill=\"#555555\"/></marker></defs>\n";
  for (const Edge* e : edges) {
    const Vertex* a = g.vertex_by_id(e->tail);
    const Vertex* b = g.vertex_by_id(e->head);
    const double width = 1.0 + 4.0 * quantity(*e) / max_q;
    out << "<line x1=\"" << fmt(map_x(a->pos[0])) << "\" y1=\""
        << fmt(map_y(a->pos[1])) << "\" x2=\"" << fmt(map_x(b->pos[0]))
        << "\" y2=\"" << fmt(map_y(b->pos[1])) << "\" stroke=\"#2b6cb0\" "
        << "stroke-width=\"" << fmt(width)
        << "\" marker-end=\"url(#arrow)\"/>\n";
    if (spec.labels) {
      const double mx = 0.5 * (map_x(a->pos[0]) + map_x(b->pos[0]));
      const double my = 0.5 * (map_y(a->pos[1]) + map_y(b->pos[1]));
      out << "<text x=\"" << fmt(mx) << "\" y=\"" << fmt(my)
          << "\" font-size=\"12\" fill=\"#222222\">" << fmt(e->weight)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace branchflow
