#include "branchflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <set>

#include "branchflow/io.hpp"

namespace branchflow {

TransportGraph random_graph(std::mt19937_64& rng, const GraphGenOptions& opts) {
  std::uniform_int_distribution<int> nv(opts.min_vertices, opts.max_vertices);
  std::uniform_real_distribution<double> coord(0.0, opts.coord_span);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wdist(opts.weight_min, opts.weight_max);

  const int n = nv(rng);
  TransportGraph g;
  for (int i = 0; i < n; ++i) {
    Position pos(opts.dim);
    for (int tries = 0; tries < 100; ++tries) {
      for (double& x : pos) x = coord(rng);
      bool clear = true;
      for (const Vertex& v : g.vertices)
        clear &= distance(v.pos, pos) > 1e-3 * opts.coord_span;
      if (clear) break;
    }
    g.vertices.push_back({i, pos});
  }

  std::set<std::pair<int, int>> pairs;
  auto add_edge = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    if (a == b || !pairs.insert({key.first, key.second}).second) return;
    double w = wdist(rng);
    if (opts.weight_cap) w = std::min(w, *opts.weight_cap);
    const bool forward = unit(rng) < 0.5;
    g.edges.push_back({static_cast<int>(g.edges.size()), forward ? a : b,
                       forward ? b : a, w});
  };
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    add_edge(v, pick(rng));
  }
  std::uniform_int_distribution<int> extra(opts.force_cyclic ? 1 : 0,
                                           std::max(1, opts.extra_edges));
  const int chords = extra(rng);
  std::uniform_int_distribution<int> anyv(0, n - 1);
  for (int i = 0; i < chords * 4 && static_cast<int>(pairs.size()) <
                                        n - 1 + chords;
       ++i) {
    add_edge(anyv(rng), anyv(rng));
  }
  return canonicalize(g);
}

TransportGraph random_cyclic_safe(std::mt19937_64& rng, double capacity) {
  GraphGenOptions opts;
  opts.force_cyclic = true;
  opts.min_vertices = 4;
  opts.max_vertices = 9;
  opts.extra_edges = 3;
  TransportGraph g = random_graph(rng, opts);
  std::uniform_int_distribution<int> channels(0, 3);
  std::uniform_real_distribution<double> rem(0.05 * capacity, 0.5 * capacity);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Edge& e : g.edges) {
    const int n = channels(rng);
    double r = unit(rng) < 0.5 ? 0.0 : rem(rng);
    if (n == 0 && r == 0.0) r = rem(rng);
    e.weight = n * capacity + r;
  }
  return g;
}

TransportGraph random_overlapping(std::mt19937_64& rng,
                                  const TransportGraph& g1,
                                  const GraphGenOptions& opts) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wdist(opts.weight_min, opts.weight_max);
  std::uniform_real_distribution<double> coord(0.0, opts.coord_span);

  TransportGraph g2;
  g2.vertices = g1.vertices;
  for (const Edge& e : g1.edges) {
    if (unit(rng) > 0.5) continue;
    Edge copy = e;
    copy.id = static_cast<int>(g2.edges.size());
    copy.weight = wdist(rng);
    if (opts.weight_cap) copy.weight = std::min(copy.weight, *opts.weight_cap);
    if (unit(rng) < 0.25) std::swap(copy.tail, copy.head);
    g2.edges.push_back(copy);
  }
  // a couple of fresh vertices hanging off the shared support
  const int fresh = static_cast<int>(unit(rng) * 2.999);
  int next_id = 0;
  for (const Vertex& v : g2.vertices) next_id = std::max(next_id, v.id + 1);
  for (int i = 0; i < fresh && !g2.vertices.empty(); ++i) {
    Position pos(g2.vertices.front().pos.size());
    for (double& x : pos) x = coord(rng);
    const int anchor =
        g2.vertices[static_cast<size_t>(unit(rng) * g2.vertices.size() * 0.999)]
            .id;
    g2.vertices.push_back({next_id, pos});
    double w = wdist(rng);
    if (opts.weight_cap) w = std::min(w, *opts.weight_cap);
    g2.edges.push_back(
        {static_cast<int>(g2.edges.size()), next_id, anchor, w});
    ++next_id;
  }
  return canonicalize(g2);
}

namespace {

struct Trial {
  std::mt19937_64 rng;
  std::optional<double> alpha;
  std::optional<double> capacity;

  double draw_alpha() {
    if (alpha) return *alpha;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pick = u(rng);
    if (pick < 0.05) return 0.0;
    if (pick < 0.10) return 1.0;
    return u(rng);
  }
  double draw_capacity() {
    if (capacity) return *capacity;
    std::uniform_real_distribution<double> u(0.1, 4.0);
    return u(rng);
  }
  CostParams draw_params() { return {draw_alpha(), draw_capacity(), 1e-12}; }
};

bool leq(double lhs, double rhs) {
  return lhs <= rhs + kIneqTol * std::max(1.0, std::abs(rhs));
}

using Check = std::function<std::optional<nlohmann::json>(Trial&)>;

FamilyResult run_family(const std::string& name, long trials,
                        std::uint64_t seed, std::optional<double> alpha,
                        std::optional<double> capacity, const Check& check) {
  FamilyResult result;
  result.name = name;
  result.trials = trials;
  Trial trial{std::mt19937_64(seed), alpha, capacity};
  for (long i = 0; i < trials; ++i) {
    std::optional<nlohmann::json> violation = check(trial);
    if (violation) {
      ++result.violations;
      if (result.counterexample.empty()) {
        (*violation)["family"] = name;
        (*violation)["trial"] = i;
        result.counterexample = violation->dump();
      }
    }
  }
  return result;
}

nlohmann::json scalar_instance(double x, const CostParams& p) {
  return {{"x", x}, {"alpha", p.alpha}, {"capacity", p.capacity}};
}

nlohmann::json graph_instance(const TransportGraph& g, const CostParams& p) {
  return {{"alpha", p.alpha},
          {"capacity", p.capacity},
          {"graph", graph_to_json(g)}};
}

}  // namespace

VerifyReport run_verify_suites(long trials, std::uint64_t seed,
                               std::optional<double> alpha,
                               std::optional<double> capacity) {
  VerifyReport report;
  std::uint64_t family_index = 0;
  auto run = [&](const std::string& name, const Check& check) {
    report.families.push_back(run_family(name, trials, seed + family_index++,
                                         alpha, capacity, check));
    report.all_pass = report.all_pass && report.families.back().violations == 0;
  };

  // x/c = H_{c,1} <= H_{c,alpha} <= H_{c,0} <= floor(x/c) + 1
  run("h_chain", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = 10.0 * p.capacity * u(t.rng);
    if (u(t.rng) < 0.2) x = std::round(x / p.capacity) * p.capacity;
    const double h = h_value(x, p);
    const double h0 = h_value(x, {0.0, p.capacity, p.int_snap});
    if (leq(x / p.capacity, h) && leq(h, h0) &&
        leq(h0, std::floor(x / p.capacity) + 1.0))
      return std::nullopt;
    return scalar_instance(x, p);
  });

  run("h_subadditive", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    std::uniform_real_distribution<double> u(0.0, 10.0 * p.capacity);
    const double x1 = u(t.rng), x2 = u(t.rng);
    if (leq(h_value(x1 + x2, p), h_value(x1, p) + h_value(x2, p)))
      return std::nullopt;
    nlohmann::json j = scalar_instance(x1, p);
    j["x2"] = x2;
    return j;
  });

  // increasing in x; for fixed x,c decreasing in alpha
  run("h_monotonicity", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    std::uniform_real_distribution<double> u(0.0, 10.0 * p.capacity);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    double x1 = u(t.rng), x2 = u(t.rng);
    if (x1 > x2) std::swap(x1, x2);
    if (!leq(h_value(x1, p), h_value(x2, p))) return scalar_instance(x1, p);
    double a1 = ua(t.rng), a2 = ua(t.rng);
    if (a1 > a2) std::swap(a1, a2);
    const double x = u(t.rng);
    if (!leq(h_value(x, {a2, p.capacity, p.int_snap}),
             h_value(x, {a1, p.capacity, p.int_snap})))
      return scalar_instance(x, p);
    return std::nullopt;
  });

  run("h_scale_identity", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    std::uniform_real_distribution<double> u(0.0, 10.0 * p.capacity);
    const double x = u(t.rng);
    const double lhs = h_value(x, p);
    const double rhs = h_value(x / p.capacity, {p.alpha, 1.0, p.int_snap});
    if (std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)))
      return std::nullopt;
    return scalar_instance(x, p);
  });

  run("subadditivity", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    GraphGenOptions opts;
    const TransportGraph g1 = random_graph(t.rng, opts);
    const TransportGraph g2 = random_overlapping(t.rng, g1, opts);
    const InequalityReport report = verify_inequalities(g1, g2, p, 1.0);
    for (const InequalityCheck& c : report.checks) {
      if (c.name == "subadditivity" && !c.pass) {
        nlohmann::json j = graph_instance(g1, p);
        j["graph2"] = graph_to_json(g2);
        return j;
      }
    }
    return std::nullopt;
  });

  // M(T) <= c^{1-a} M_{a,c}(T) <= M(T) + c * size(T)
  run("mass_bounds", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    const TransportGraph g = random_graph(t.rng, {});
    const InequalityReport report =
        verify_inequalities(g, TransportGraph{}, p, 1.0);
    for (const InequalityCheck& c : report.checks)
      if (c.name.rfind("mass_", 0) == 0 && c.name.back() == '1' && !c.pass)
        return graph_instance(g, p);
    return std::nullopt;
  });

  // M_{a,c}(h T) <= h^a M_{a,c}(T) on [0,1], reversed on [1,inf)
  run("scalar_multiple", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    const TransportGraph g = random_graph(t.rng, {});
    const TransportGraph empty;
    for (const double h : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
                           1.0, 1.5, 2.0, 4.0, 8.0}) {
      const InequalityReport report = verify_inequalities(g, empty, p, h);
      for (const InequalityCheck& c : report.checks) {
        if (c.name.rfind("scalar_multiple", 0) == 0 && !c.pass) {
          nlohmann::json j = graph_instance(g, p);
          j["h"] = h;
          return j;
        }
      }
    }
    return std::nullopt;
  });

  // sum of sub-capacity paths dominates the merged path
  run("multi_path_domination", [](Trial& t) -> std::optional<nlohmann::json> {
    const CostParams p = t.draw_params();
    GraphGenOptions opts;
    opts.weight_cap = p.capacity;
    std::uniform_int_distribution<int> count(2, 4);
    const int k = count(t.rng);
    TransportGraph sum;
    double rhs = 0.0;
    std::vector<TransportGraph> parts;
    for (int i = 0; i < k; ++i) {
      TransportGraph gi = i == 0 || parts.empty()
                              ? random_graph(t.rng, opts)
                              : random_overlapping(t.rng, parts.front(), opts);
      rhs += m_alpha(gi, p.alpha);
      sum = add_graphs(sum, gi);
      parts.push_back(std::move(gi));
    }
    if (leq(m_alpha_c(sum, p).total, rhs)) return std::nullopt;
    return graph_instance(sum, p);
  });

  // equals M_alpha once c clears the largest weight; non-increasing in c
  run("capacity_limit", [](Trial& t) -> std::optional<nlohmann::json> {
    const double a = t.draw_alpha();
    const TransportGraph g = random_graph(t.rng, {});
    double wmax = 0.0;
    for (const Edge& e : g.edges) wmax = std::max(wmax, e.weight);
    if (wmax == 0.0) return std::nullopt;
    const double target = m_alpha(g, a);
    const CostParams at{a, 2.0 * wmax, 1e-12};
    const double v = m_alpha_c(g, at).total;
    if (std::abs(v - target) > 1e-12 * std::max(1.0, target))
      return graph_instance(g, at);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 8; ++k) {
      const double c = wmax / 8.0 * std::pow(2.0, k);
      const double vk = m_alpha_c(g, {a, c, 1e-12}).total;
      if (!leq(vk, prev)) return graph_instance(g, {a, c, 1e-12});
      prev = vk;
    }
    if (!leq(target, prev) || !leq(prev, target))
      return graph_instance(g, {a, wmax * 32.0, 1e-12});
    return std::nullopt;
  });

  // M_{a,c}(T) >= M(T) / c^{1-a} blows up along c = 2^-k
  run("small_c_blowup", [](Trial& t) -> std::optional<nlohmann::json> {
    const double a = t.draw_alpha();
    const TransportGraph g = random_graph(t.rng, {});
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const CostParams p{a, std::pow(2.0, -k), 1e-12};
      const double v = m_alpha_c(g, p).total;
      if (!leq(mass(g) / std::pow(p.capacity, 1.0 - a), v))
        return graph_instance(g, p);
      if (!leq(prev, v)) return graph_instance(g, p);
      prev = v;
    }
    return std::nullopt;
  });

  return report;
}

}  // namespace branchflow
