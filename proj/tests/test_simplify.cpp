#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "polymean/error.hpp"
#include "polymean/frechet.hpp"
#include "polymean/oracle.hpp"
#include "polymean/simplify.hpp"
#include "random_curves.hpp"

using namespace polymean;
using polymean::testing::random_curve;
using polymean::testing::random_walk;
using polymean::testing::zigzag;

namespace {

std::size_t count_kind(const std::vector<Shortcut>& s, ShortcutKind kind) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](const Shortcut& c) { return c.kind == kind; }));
}

// Exhaustive 0/1 path search for tiny graphs.
int exhaustive_min_weight(const EventGraph& g) {
  auto out = g.out_edges();
  int best = 1 << 20;
  std::vector<bool> seen(g.nodes.size(), false);
  auto dfs = [&](auto&& self, std::size_t v, int w) -> void {
    if (v == g.sink) {
      best = std::min(best, w);
      return;
    }
    seen[v] = true;
    for (std::size_t e : out[v])
      if (!seen[g.edges[e].to]) self(self, g.edges[e].to, w + g.edges[e].weight);
    seen[v] = false;
  };
  dfs(dfs, g.source, 0);
  return best;
}

} // namespace

TEST(Shortcuts, TriangleHasThreeVertexPairs) {
  Polyline p{{0, 0}, {1, 1}, {2, 0}};
  auto s = shortcut_candidates(p, p, VertexMode::InputVertices);
  EXPECT_EQ(count_kind(s, ShortcutKind::VertexPair), 3u);
  EXPECT_EQ(count_kind(s, ShortcutKind::Extension), 0u);
}

TEST(Shortcuts, VertexPairsMatchEnumeration) {
  Polyline p = zigzag(5, 1.0);
  auto s = shortcut_candidates(p, p, VertexMode::InputVertices);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const Shortcut& c : s)
    if (c.kind == ShortcutKind::VertexPair) pairs.insert({c.from_vertex, c.to_vertex});
  std::set<std::pair<std::size_t, std::size_t>> expect;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) expect.insert({i, j});
  EXPECT_EQ(pairs, expect);
}

TEST(Shortcuts, ExtensionsLandOnTheCurve) {
  Polyline p = zigzag(5, 1.0);
  auto s = shortcut_candidates(p, p, VertexMode::AnyPlanePoint);
  for (const Shortcut& c : s) {
    if (c.kind == ShortcutKind::VertexPair) continue;
    Point on = p.edge(c.hit.edge).at(c.hit.t);
    EXPECT_NEAR(distance(on, c.segment.b), 0.0, 1e-9);
  }
}

TEST(EventPoints, ContainVerticesInOrder) {
  Polyline p{{0, 0}, {1, 0.4}, {2, -0.3}, {3, 0.1}};
  auto ev = event_points({p}, 0.25, 0.0);
  std::size_t vertices = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    vertices += ev[i].is_vertex;
    if (i > 0) EXPECT_LE(ev[i - 1].arc, ev[i].arc);
    EXPECT_NEAR(distance(ev[i].point, p.edge(ev[i].pos.edge).at(ev[i].pos.t)), 0.0, 1e-9);
  }
  EXPECT_EQ(vertices, p.size());
}

TEST(EventGraph, IdenticalSegmentIsOneLink) {
  Polyline p{{0, 0}, {1, 0}};
  EventGraph g = build_event_graph(p, p, 0.0, VertexMode::InputVertices);
  LinkPath path = min_link_path(g);
  EXPECT_EQ(path.weight, 1);
  auto v = path_vertices(g, path);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.front(), p.front());
  EXPECT_EQ(v.back(), p.back());
}

TEST(EventGraph, CollinearCurveIsOneLink) {
  Polyline p{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  EventGraph g = build_event_graph(p, p, 0.0, VertexMode::InputVertices);
  EXPECT_EQ(min_link_path(g).weight, 1);
}

TEST(EventGraph, MinLinkPathMatchesExhaustiveSearch) {
  std::mt19937 rng(17);
  for (int round = 0; round < 10; ++round) {
    Polyline p = random_curve(rng, 5);
    EventGraph g = build_event_graph(p, p, 0.3, VertexMode::InputVertices);
    EXPECT_EQ(min_link_path(g).weight, exhaustive_min_weight(g));
  }
}

TEST(EventGraph, HandBuiltZeroWeightChain) {
  EventGraph g;
  g.nodes.resize(4);
  g.nodes[0].kind = NodeKind::Source;
  g.nodes[3].kind = NodeKind::Sink;
  g.source = 0;
  g.sink = 3;
  g.edges = {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {0, 3, 1}};
  LinkPath path = min_link_path(g);
  EXPECT_EQ(path.weight, 0);
  EXPECT_EQ(path.nodes, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(EventGraph, UnreachableSinkThrows) {
  EventGraph g;
  g.nodes.resize(2);
  g.source = 0;
  g.sink = 1;
  try {
    min_link_path(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unreachable);
  }
}

TEST(MinK, InputVerticesMatchesSubsetEnumeration) {
  std::mt19937 rng(5);
  for (int round = 0; round < 25; ++round) {
    Polyline p = random_curve(rng, 6);
    double eps = 0.1 + 0.05 * (round % 5);
    auto r = min_k_simplify(p, eps, VertexMode::InputVertices);
    EXPECT_EQ(r.links, brute_force_min_k(p, eps, VertexMode::InputVertices, 0.0)) << "round " << round;
    EXPECT_TRUE(verify(r, p));
    EXPECT_LE(r.achieved_eps, eps + 1e-9);
  }
}

TEST(MinK, PlanePointsNeverNeedMoreLinks) {
  std::mt19937 rng(8);
  for (int round = 0; round < 15; ++round) {
    Polyline p = random_walk(rng, 7);
    double eps = 0.08;
    auto input = min_k_simplify(p, eps, VertexMode::InputVertices);
    auto plane = min_k_simplify(p, eps, VertexMode::AnyPlanePoint);
    EXPECT_LE(plane.links, input.links);
    EXPECT_LE(plane.achieved_eps, eps + 1e-7);
    EXPECT_EQ(plane.curve.front(), p.front());
    EXPECT_EQ(plane.curve.back(), p.back());
  }
}

TEST(MinK, PlanePointsNoWorseThanGridOracle) {
  std::mt19937 rng(21);
  for (int round = 0; round < 6; ++round) {
    Polyline p = random_curve(rng, 5);
    double eps = 0.2;
    auto plane = min_k_simplify(p, eps, VertexMode::AnyPlanePoint);
    std::size_t grid = brute_force_min_k(p, eps, VertexMode::AnyPlanePoint, 0.1);
    EXPECT_LE(plane.links, grid) << "round " << round;
  }
}

TEST(MinK, MonotoneInEps) {
  std::mt19937 rng(2);
  Polyline p = random_walk(rng, 12);
  std::size_t prev = p.edge_count();
  for (double eps : {0.0, 0.02, 0.05, 0.1, 0.2, 0.4, 1.0}) {
    auto r = min_k_simplify(p, eps, VertexMode::InputVertices);
    EXPECT_LE(r.links, prev);
    prev = r.links;
  }
  EXPECT_EQ(prev, 1u);
}

TEST(MinEps, AllLinksGiveZero) {
  Polyline p{{0, 0}, {1, 1}, {2, 0}, {3, 1}};
  auto r = min_eps_simplify(p, 3, 0.0, VertexMode::InputVertices);
  EXPECT_NEAR(r.achieved_eps, 0.0, 1e-12);
}

TEST(MinEps, CollinearOneLinkIsZero) {
  Polyline p{{0, 0}, {1, 0}, {2, 0}};
  auto r = min_eps_simplify(p, 1, 0.0, VertexMode::InputVertices);
  EXPECT_NEAR(r.achieved_eps, 0.0, 1e-12);
  EXPECT_EQ(r.links, 1u);
}

TEST(MinEps, MatchesSubsetEnumeration) {
  std::mt19937 rng(31);
  for (int round = 0; round < 10; ++round) {
    Polyline p = random_curve(rng, 6);
    double delta = 0.01;
    auto r = min_eps_simplify(p, 2, delta, VertexMode::InputVertices);
    double opt = brute_force_min_eps(p, 2);
    EXPECT_LE(r.links, 2u);
    EXPECT_GE(r.achieved_eps, opt - 1e-9);
    EXPECT_LE(r.achieved_eps, opt + delta + 1e-9) << "round " << round;
  }
}

TEST(MinEps, ClosedCurveOneLinkIsInfeasible) {
  Polyline p{{0, 0}, {1, 0}, {1, 1}, {0, 0}};
  EXPECT_THROW(min_eps_simplify(p, 1, 0.0, VertexMode::InputVertices), Error);
}

TEST(Bicriteria, CollinearIsOneLink) {
  Polyline p{{0, 0}, {1, 0}, {2, 0}, {5, 0}};
  auto r = bicriteria_simplify(p, 0.1);
  EXPECT_EQ(r.links, 1u);
}

TEST(Bicriteria, WithinTwiceTheOptimum) {
  std::mt19937 rng(44);
  for (int round = 0; round < 10; ++round) {
    Polyline p = random_walk(rng, 8);
    double eps = 0.1;
    auto r = bicriteria_simplify(p, eps);
    auto opt = min_k_simplify(p, eps, VertexMode::AnyPlanePoint);
    EXPECT_LE(r.links, 2 * opt.links);
    EXPECT_LE(r.achieved_eps, 2 * eps + 1e-7);
    EXPECT_TRUE(verify(r, p));
  }
}

TEST(Greedy, NeverBeatsTheOptimum) {
  std::mt19937 rng(9);
  for (int round = 0; round < 15; ++round) {
    Polyline p = random_walk(rng, 10);
    double eps = 0.1;
    auto g = greedy_disk_simplify(p, eps);
    auto opt = min_k_simplify(p, eps, VertexMode::InputVertices);
    EXPECT_GE(g.links, opt.links);
    EXPECT_LE(g.achieved_eps, eps + 1e-7);
  }
}

TEST(ImaiIri, FeasibleAndSelfConsistent) {
  std::mt19937 rng(12);
  for (int round = 0; round < 15; ++round) {
    Polyline p = random_walk(rng, 10);
    double eps = 0.1;
    auto r = imai_iri_simplify(p, eps);
    EXPECT_TRUE(verify(r, p));
    EXPECT_LE(r.achieved_eps, eps + 1e-7);
    EXPECT_GE(r.links, min_k_simplify(p, eps, VertexMode::InputVertices).links);
  }
}

TEST(ImaiIri, MinEpsReachesBudget) {
  std::mt19937 rng(13);
  Polyline p = random_walk(rng, 10);
  auto r = imai_iri_min_eps(p, 3, 0.01);
  EXPECT_LE(r.links, 3u);
  auto tighter = imai_iri_simplify(p, r.achieved_eps);
  EXPECT_LE(tighter.links, 3u);
}

TEST(Verify, DetectsTamperedError) {
  Polyline p{{0, 0}, {1, 1}, {2, 0}};
  auto r = min_k_simplify(p, 2.0, VertexMode::InputVertices);
  EXPECT_TRUE(verify(r, p));
  r.achieved_eps += 0.5;
  EXPECT_FALSE(verify(r, p));
}

TEST(VertexModeNames, RoundTrip) {
  for (VertexMode m : {VertexMode::InputVertices, VertexMode::OneCurveVertices, VertexMode::AnyPlanePoint})
    EXPECT_EQ(parse_vertex_mode(to_string(m)), m);
  EXPECT_FALSE(parse_vertex_mode("nowhere").has_value());
}
