#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "branchflow/cycles.hpp"
#include "branchflow/verify.hpp"
#include "test_support.hpp"

using namespace branchflow;
using testsupport::make_graph;
using testsupport::triangle;
using testsupport::y_graph;

namespace {

const CostParams kHalf{0.5, 1.0, 1e-12};

int count_full_channel_edges(const TransportGraph& g, const CostParams& p) {
  int n = 0;
  for (const Edge& e : g.edges) n += h_parts(e.weight, p).whole >= 1.0;
  return n;
}

int count_remainder_edges(const TransportGraph& g, const CostParams& p) {
  int n = 0;
  for (const Edge& e : g.edges) n += h_parts(e.weight, p).frac > 0.0;
  return n;
}

}  // namespace

TEST_CASE("find_cycle and is_cycle_free") {
  SUBCASE("triangle support has a 3-edge cycle") {
    const auto cy = find_cycle(triangle(0.0));
    REQUIRE(cy.has_value());
    CHECK(cy->edges.size() == 3);
    std::set<int> ids;
    for (const CycleEdge& ce : cy->edges) ids.insert(ce.edge_id);
    CHECK(ids.size() == 3);
    CHECK(cy->aligned_length + cy->anti_length == doctest::Approx(3.5));
    CHECK_FALSE(is_cycle_free(triangle(0.0)));
  }

  SUBCASE("tree supports are cycle-free") {
    const TransportGraph pure_y = make_graph(
        {{-1.0, 3.0}, {1.0, 3.0}, {0.0, 2.0}, {0.0, 0.0}},
        {{0, 2, 0.5}, {1, 2, 0.5}, {2, 3, 1.0}});
    CHECK(is_cycle_free(pure_y));
    CHECK(is_cycle_free(TransportGraph{}));
    const TransportGraph two = make_graph(
        {{0.0, 0.0}, {1.0, 0.0}, {5.0, 5.0}, {6.0, 5.0}},
        {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK(is_cycle_free(two));
  }

  SUBCASE("the straight corridor closes a support cycle with the Y") {
    CHECK_FALSE(is_cycle_free(y_graph()));
  }

  SUBCASE("parallel edges alone do not close a cycle") {
    TransportGraph g = make_graph({{0.0, 0.0}, {1.0, 0.0}}, {{0, 1, 1.0}});
    g.edges.push_back({1, 1, 0, 0.5});
    CHECK(is_cycle_free(g));
  }

  SUBCASE("flip reverses signs and swaps side lengths") {
    const Cycle cy = *find_cycle(triangle(0.0));
    const Cycle f = flip_cycle(cy);
    CHECK(f.aligned_length == cy.anti_length);
    CHECK(f.edges.size() == cy.edges.size());
    CHECK(f.edges.front().edge_id == cy.edges.back().edge_id);
    CHECK(f.edges.front().sign == -cy.edges.back().sign);
  }
}

TEST_CASE("reduce_integer_cycle") {
  SUBCASE("full-channel triangle reduces without raising the cost") {
    const Position x1{0.0, 0.0}, x2{0.75, std::sqrt(0.4375)}, x3{1.5, 0.0};
    const TransportGraph g = make_graph(
        {x1, x2, x3}, {{0, 1, 1.5}, {1, 2, 2.0}, {0, 2, 2.0}});
    const Cycle cy = *find_cycle(g);
    const TransportGraph reduced = reduce_integer_cycle(g, cy, kHalf);

    const double before = m_alpha_c(g, kHalf).total;
    const double after = m_alpha_c(reduced, kHalf).total;
    CHECK(after <= before + 1e-12);
    CHECK(count_full_channel_edges(reduced, kHalf) <
          count_full_channel_edges(g, kHalf));

    auto flow_at = [](const std::vector<std::pair<Position, double>>& flows,
                      const Position& p) {
      for (const auto& [q, f] : flows)
        if (same_position(q, p)) return f;
      return 0.0;
    };
    const auto fa = boundary_flows(g);
    const auto fb = boundary_flows(reduced);
    for (const auto& [p, f] : fa)
      CHECK(f == doctest::Approx(flow_at(fb, p)).epsilon(1e-12));
  }

  SUBCASE("cycle without a full channel cannot reduce") {
    const TransportGraph g = make_graph(
        {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}},
        {{0, 1, 0.5}, {1, 2, 0.9}, {0, 2, 0.7}});
    const Cycle cy = *find_cycle(g);
    CHECK_THROWS_AS(reduce_integer_cycle(g, cy, kHalf), PreconditionUnmet);
  }

  SUBCASE("the 0.5/1/1 triangle is not integer-reducible") {
    // The orientation with the shorter aligned side puts the half-unit edge
    // on the anti-aligned side, whose channel count floor is zero.
    const TransportGraph g = triangle(0.0);
    const Cycle cy = *find_cycle(g);
    CHECK_THROWS_AS(reduce_integer_cycle(g, cy, kHalf), PreconditionUnmet);
  }
}

TEST_CASE("reduce_fractional_cycle") {
  SUBCASE("symmetric square with alternating directions") {
    const TransportGraph g = make_graph(
        {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}},
        {{0, 1, 0.3}, {2, 1, 0.3}, {2, 3, 0.3}, {0, 3, 0.3}});
    const Cycle cy = *find_cycle(g);
    const TransportGraph reduced = reduce_fractional_cycle(g, cy, kHalf);

    REQUIRE(reduced.edges.size() == 2);
    for (const Edge& e : reduced.edges)
      CHECK(e.weight == doctest::Approx(0.6).epsilon(1e-12));
    const double before = m_alpha_c(g, kHalf).total;
    const double after = m_alpha_c(reduced, kHalf).total;
    CHECK(before == doctest::Approx(4.0 * std::sqrt(0.3)).epsilon(1e-12));
    CHECK(after == doctest::Approx(2.0 * std::sqrt(0.6)).epsilon(1e-12));
    CHECK(after <= before + 1e-12);
  }

  SUBCASE("remainders 0.9, 0.9, 0.3 violate the max+min hypothesis") {
    const TransportGraph g = make_graph(
        {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}},
        {{0, 1, 0.9}, {1, 2, 0.9}, {0, 2, 0.3}});
    const Cycle cy = *find_cycle(g);
    CHECK_THROWS_AS(reduce_fractional_cycle(g, cy, kHalf), PreconditionUnmet);
  }

  SUBCASE("a cycle with zero minimum remainder is left unchanged") {
    const TransportGraph g = make_graph(
        {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}},
        {{0, 1, 1.0}, {1, 2, 0.4}, {0, 2, 0.3}});
    const Cycle cy = *find_cycle(g);
    CHECK(graphs_identical(reduce_fractional_cycle(g, cy, kHalf), g));
  }

  SUBCASE("reduction progress strictly shrinks the remainder support") {
    std::mt19937_64 rng(99);
    int attempted = 0;
    for (int i = 0; i < 60; ++i) {
      const TransportGraph g = random_cyclic_safe(rng, 1.0);
      // keep only the remainder part so every cycle is fractional
      TransportGraph rest = g;
      for (Edge& e : rest.edges)
        e.weight = e.weight - h_parts(e.weight, kHalf).whole * kHalf.capacity;
      std::vector<Edge> kept;
      for (const Edge& e : rest.edges)
        if (e.weight > 1e-9) kept.push_back(e);
      rest.edges = std::move(kept);
      rest = canonicalize(rest);
      const auto cy = find_cycle(rest);
      if (!cy) continue;
      ++attempted;
      try {
        const TransportGraph red = reduce_fractional_cycle(rest, *cy, kHalf);
        CHECK(m_alpha_c(red, kHalf).total <=
              m_alpha_c(rest, kHalf).total + 1e-9);
        CHECK(count_remainder_edges(red, kHalf) <
              count_remainder_edges(rest, kHalf));
      } catch (const PreconditionUnmet&) {
      }
    }
    CHECK(attempted > 10);
  }
}

TEST_CASE("decompose") {
  SUBCASE("sub-capacity graphs split trivially") {
    const TransportGraph g = make_graph(
        {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}},
        {{0, 1, 0.5}, {1, 2, 0.4}}

    );
    const Decomposition d = decompose(g, kHalf);
    CHECK(d.t1.edges.empty());
    CHECK(graphs_close(d.t2, g, 1e-12));
    CHECK(d.certificate.cost_sum ==
          doctest::Approx(d.certificate.cost_original).epsilon(1e-12));
  }

  SUBCASE("single edge splits into channels and remainder exactly") {
    const TransportGraph g =
        make_graph({{0.0, 0.0}, {2.0, 0.0}}, {{0, 1, 2.5}});
    const Decomposition d = decompose(g, kHalf);
    REQUIRE(d.t1.edges.size() == 1);
    REQUIRE(d.t2.edges.size() == 1);
    CHECK(d.t1.edges[0].weight == doctest::Approx(2.0));
    CHECK(d.t2.edges[0].weight == doctest::Approx(0.5));
    CHECK(d.certificate.cost_sum ==
          doctest::Approx(d.certificate.cost_original).epsilon(1e-14));
    CHECK(d.certificate.cost_combined ==
          doctest::Approx(d.certificate.cost_original).epsilon(1e-14));
  }

  SUBCASE("the 0.5/1/1 triangle splits into a cycle-free pair") {
    const Decomposition d = decompose(triangle(0.0), kHalf);
    CHECK(d.certificate.t1_cycle_free);
    CHECK(d.certificate.t2_cycle_free);
    CHECK(d.certificate.t1_integer_multiples);
    CHECK(d.certificate.t2_within_capacity);
    CHECK(d.certificate.boundary_preserved);
    CHECK(d.certificate.unreduced.empty());
    CHECK(d.certificate.cost_t1 == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(d.certificate.cost_t2 ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(d.certificate.cost_sum <= testsupport::kF0 + 1e-9);
    REQUIRE(d.t2.edges.size() == 1);
    CHECK(d.t2.edges[0].weight == doctest::Approx(0.5));
  }

  SUBCASE("random safe cyclic graphs satisfy the certificate invariants") {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 100; ++i) {
      const TransportGraph g = random_cyclic_safe(rng, 1.0);
      const Decomposition d = decompose(g, kHalf);
      CHECK(d.certificate.t1_integer_multiples);
      CHECK(d.certificate.t2_within_capacity);
      CHECK(d.certificate.boundary_preserved);
      CHECK(d.certificate.t1_cycle_free);
      CHECK(d.certificate.cost_sum <= d.certificate.cost_original + 1e-9);
      CHECK(d.certificate.cost_sum ==
            doctest::Approx(d.certificate.cost_combined).epsilon(1e-9));
      CHECK((d.certificate.t2_cycle_free || !d.certificate.unreduced.empty()));
    }
  }

  SUBCASE("the certificate holds at both alpha endpoints and odd capacities") {
    std::mt19937_64 rng(321);
    for (const double alpha : {0.0, 0.3, 1.0}) {
      for (const double capacity : {0.7, 1.0, 2.3}) {
        const CostParams p{alpha, capacity, 1e-12};
        for (int i = 0; i < 25; ++i) {
          const TransportGraph g = random_cyclic_safe(rng, capacity);
          const Decomposition d = decompose(g, p);
          CHECK(d.certificate.t1_integer_multiples);
          CHECK(d.certificate.t2_within_capacity);
          CHECK(d.certificate.boundary_preserved);
          CHECK(d.certificate.t1_cycle_free);
          CHECK(d.certificate.cost_sum <= d.certificate.cost_original + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("fractional reduction above capacity keeps the channel floors") {
  // Remainders (0.3, 0.4, 0.2) move around the cycle while the full
  // channels stay put.
  const TransportGraph g = make_graph(
      {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}},
      {{0, 1, 1.3}, {1, 2, 2.4}, {0, 2, 1.2}});
  const Cycle cy = *find_cycle(g);
  const TransportGraph reduced = reduce_fractional_cycle(g, cy, kHalf);

  CHECK(m_alpha_c(reduced, kHalf).total <= m_alpha_c(g, kHalf).total + 1e-12);
  REQUIRE(reduced.edges.size() == 3);
  int zero_remainders = 0;
  for (const Edge& e : reduced.edges) {
    const Edge* orig = g.edge_by_id(e.id);
    REQUIRE(orig != nullptr);
    CHECK(h_parts(e.weight, kHalf).whole ==
          h_parts(orig->weight, kHalf).whole);
    zero_remainders += h_parts(e.weight, kHalf).frac == 0.0;
  }
  CHECK(zero_remainders >= 1);
}

TEST_CASE("the cyclic triangle beats every loop shift") {
  const CostParams p = kHalf;
  const double f0 = m_alpha_c(triangle(0.0), p).total;
  CHECK(f0 < m_alpha_c(triangle(0.5), p).total);
  CHECK(f0 < m_alpha_c(triangle(-0.5), p).total);
  CHECK(f0 < m_alpha_c(triangle(1.0), p).total);
  CHECK(f0 < m_alpha_c(triangle(-1.0), p).total);
}
