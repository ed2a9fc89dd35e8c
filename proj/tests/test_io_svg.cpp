#include <doctest.h>

#include <random>

#include "branchflow/io.hpp"
#include "branchflow/svg.hpp"
#include "branchflow/verify.hpp"
#include "test_support.hpp"

using namespace branchflow;
using nlohmann::json;
using testsupport::make_graph;
using testsupport::triangle;

TEST_CASE("graph JSON round-trips exactly") {
  std::mt19937_64 rng(43);
  GraphGenOptions opts;
  for (int dim : {2, 3}) {
    opts.dim = dim;
    for (int i = 0; i < 50; ++i) {
      const TransportGraph g = random_graph(rng, opts);
      const TransportGraph back = graph_from_json(graph_to_json(g));
      CHECK(graphs_identical(g, back));
      // through text as well, not just the DOM
      const TransportGraph twice =
          graph_from_json(json::parse(graph_to_json(g).dump()));
      CHECK(graphs_identical(g, twice));
    }
  }
}

TEST_CASE("problem files parse and validate") {
  const json doc{{"version", 1},
                 {"alpha", 0.5},
                 {"capacity", 1.0},
                 {"source", json::array({{{"pos", {-1.0, 3.0}}, {"mass", 2.5}},
                                         {{"pos", {1.0, 3.0}}, {"mass", 0.5}}})},
                 {"sink", json::array({{{"pos", {0.0, 0.0}}, {"mass", 3.0}}})}};
  const ProblemFile f = problem_from_json(doc);
  CHECK(f.params.alpha == 0.5);
  CHECK(total_mass(f.source) == doctest::Approx(3.0));
  CHECK_FALSE(f.graph.has_value());

  SUBCASE("unknown version is rejected") {
    json bad = doc;
    bad["version"] = 2;
    CHECK_THROWS_AS(problem_from_json(bad), ParseError);
  }

  SUBCASE("alpha outside [0,1] is rejected") {
    json bad = doc;
    bad["alpha"] = 1.5;
    CHECK_THROWS_AS(problem_from_json(bad), ParseError);
  }

  SUBCASE("nonpositive capacity is rejected") {
    json bad = doc;
    bad["capacity"] = 0.0;
    CHECK_THROWS_AS(problem_from_json(bad), ParseError);
  }

  SUBCASE("negative edge weights normalize to the reversed edge") {
    json with_graph = doc;
    with_graph["graph"] = {
        {"vertices", json::array({{{"id", 0}, {"pos", {0.0, 0.0}}},
                                  {{"id", 1}, {"pos", {1.0, 0.0}}}})},
        {"edges",
         json::array({{{"id", 0}, {"tail", 0}, {"head", 1}, {"weight", -2.0}}})}};
    const ProblemFile g = problem_from_json(with_graph);
    REQUIRE(g.graph.has_value());
    CHECK(g.graph->edges[0].tail == 1);
    CHECK(g.graph->edges[0].head == 0);
    CHECK(g.graph->edges[0].weight == 2.0);
  }

  SUBCASE("self loops are rejected") {
    json with_graph = doc;
    with_graph["graph"] = {
        {"vertices", json::array({{{"id", 0}, {"pos", {0.0, 0.0}}}})},
        {"edges",
         json::array({{{"id", 0}, {"tail", 0}, {"head", 0}, {"weight", 1.0}}})}};
    CHECK_THROWS_AS(problem_from_json(with_graph), ParseError);
  }
}

TEST_CASE("render_svg") {
  const RenderSpec spec;

  SUBCASE("one line per edge") {
    const TransportGraph g =
        make_graph({{0.0, 0.0}, {1.0, 1.0}}, {{0, 1, 1.0}});
    const std::string svg = render_svg(g, spec);
    size_t lines = 0, at = 0;
    while ((at = svg.find("<line ", at)) != std::string::npos) {
      ++lines;
      ++at;
    }
    CHECK(lines == 1);
  }

  SUBCASE("triangle strokes are ordered by weight") {
    const std::string svg = render_svg(canonicalize(triangle(0.0)), spec);
    size_t lines = 0, at = 0;
    while ((at = svg.find("<line ", at)) != std::string::npos) {
      ++lines;
      ++at;
    }
    CHECK(lines == 3);
    // widths 1 + 4 * w / wmax for w in {0.5, 1, 1}
    CHECK(svg.find("stroke-width=\"3\"") != std::string::npos);
    CHECK(svg.find("stroke-width=\"5\"") != std::string::npos);
  }

  SUBCASE("byte-identical across calls") {
    const TransportGraph g = canonicalize(testsupport::y_graph());
    CHECK(render_svg(g, spec) == render_svg(g, spec));
  }

  SUBCASE("stroke width grows with the rendered quantity") {
    std::mt19937_64 rng(47);
    const TransportGraph g = random_graph(rng, {});
    for (const RenderSpec::Stroke mode :
         {RenderSpec::Stroke::kWeight, RenderSpec::Stroke::kHValue}) {
      RenderSpec s;
      s.stroke = mode;
      const std::string svg = render_svg(g, s);
      CHECK(svg.find("<svg") == 0);
    }
  }

  SUBCASE("non-planar graphs are rejected") {
    TransportGraph g;
    g.vertices = {{0, {0.0, 0.0, 0.0}}, {1, {1.0, 0.0, 0.0}}};
    g.edges = {{0, 0, 1, 1.0}};
    CHECK_THROWS_AS(render_svg(g, spec), UnsupportedDimension);
  }
}

TEST_CASE("verify suites pass with the default seed") {
  const VerifyReport r = run_verify_suites(200, 42);
  CHECK(r.all_pass);

  SUBCASE("forced alpha = 1 keeps subadditivity tight on disjoint pairs") {
    const VerifyReport r1 = run_verify_suites(200, 42, 1.0, std::nullopt);
    CHECK(r1.all_pass);
  }

  SUBCASE("forced alpha = 0 exercises the jump behavior") {
    const VerifyReport r0 = run_verify_suites(200, 42, 0.0, 1.0);
    CHECK(r0.all_pass);
  }
}
