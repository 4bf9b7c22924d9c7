#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "boolperc/graph.hpp"
#include "oracles.hpp"

using namespace boolperc;

TEST_CASE("build_graph symmetrizes, deduplicates, drops self-loops") {
  GraphView g = build_graph(4, {{0, 1}, {1, 0}, {0, 1}, {2, 2}, {1, 3}}, false);
  CHECK(g.n == 4);
  CHECK_FALSE(g.directed);
  CHECK(g.out[0] == std::vector<Vertex>{1});
  CHECK(g.out[1] == std::vector<Vertex>{0, 3});
  CHECK(g.out[2].empty());
  CHECK(g.in[1] == g.out[1]);
  CHECK(g.max_degree == 2);
  CHECK_FALSE(g.has_window());
  CHECK(g.is_interior(2));
}

TEST_CASE("directed build keeps orientation") {
  GraphView g = build_graph(3, {{0, 1}, {1, 2}}, true);
  CHECK(g.directed);
  CHECK(g.out[0] == std::vector<Vertex>{1});
  CHECK(g.in[0].empty());
  CHECK(g.in[1] == std::vector<Vertex>{0});
  // Joint degree of vertex 1 counts both the in- and the out-neighbor.
  CHECK(g.max_degree == 2);
}

TEST_CASE("one-dimensional window geometry") {
  GraphView g = z_window(1, 3, 2);
  CHECK(g.n == 11);  // coordinates -5..5
  CHECK(g.halo == 2);
  CHECK(g.has_window());
  std::size_t interior = 0, markers = g.boundary_markers.size();
  for (Vertex v = 0; v < g.n; ++v) interior += g.is_interior(v) ? 1 : 0;
  CHECK(interior == 7);
  CHECK(markers == 2);
  CHECK(g.is_interior(g.root));
  CHECK(g.out[g.root].size() == 2);
}

TEST_CASE("two-dimensional window geometry") {
  GraphView g = z_window(2, 2, 1);
  CHECK(g.n == 49);  // 7 x 7 box
  std::size_t interior = 0;
  for (Vertex v = 0; v < g.n; ++v) interior += g.is_interior(v) ? 1 : 0;
  CHECK(interior == 25);
  // Markers sit on the outermost interior shell: the censoring ring.
  CHECK(g.boundary_markers.size() == 16);
  CHECK(g.max_degree == 4);
}

TEST_CASE("halo zero leaves the whole window interior and unwatched") {
  GraphView g = z_window(1, 4, 0);
  CHECK_FALSE(g.has_window());
  for (Vertex v = 0; v < g.n; ++v) CHECK(g.is_interior(v));
}

TEST_CASE("stable ids couple windows of different sizes") {
  GraphView small = z_window(1, 2, 1);
  GraphView big = z_window(1, 4, 1);
  std::set<std::uint64_t> small_ids, big_ids;
  for (Vertex v = 0; v < small.n; ++v) small_ids.insert(small.stable_id[v]);
  for (Vertex v = 0; v < big.n; ++v) big_ids.insert(big.stable_id[v]);
  CHECK(std::includes(big_ids.begin(), big_ids.end(), small_ids.begin(),
                      small_ids.end()));
  CHECK(small.stable_id[small.root] == big.stable_id[big.root]);
}

TEST_CASE("oriented tree ball: edges point at the parent") {
  GraphView g = oriented_tree_ball(2, 2, 1);
  // Undirected shells around the root: 1, 3, 6, 12 vertices (each shell holds
  // one more ancestor plus the fresh descendants).
  CHECK(g.n == 22);
  CHECK(g.directed);
  CHECK(g.out[g.root].size() == 1);  // the root's parent is materialized
  std::size_t interior = 0;
  for (Vertex v = 0; v < g.n; ++v) {
    interior += g.is_interior(v) ? 1 : 0;
    CHECK(g.out[v].size() <= 1);
    CHECK(g.in[v].size() <= 2);
  }
  CHECK(interior == 10);
  CHECK(g.max_degree == 3);
  CHECK(g.boundary_markers.size() == 6);  // the outermost interior shell
}

TEST_CASE("balls and spheres match the set-expansion oracle") {
  GraphView g = oracles::random_digraph(60, 2, 11);
  for (Vertex x = 0; x < g.n; x += 7) {
    for (std::uint32_t r = 0; r <= 4; ++r) {
      CHECK(ball(g, x, r) == oracles::to_vec(oracles::set_ball(g.out, x, r)));
      CHECK(transpose_ball(g, x, r) == oracles::to_vec(oracles::set_ball(g.in, x, r)));
    }
  }
  CHECK(ball(g, 0, 0).empty());
  CHECK(ball(g, 0, 1) == std::vector<Vertex>{0});
}

TEST_CASE("boundary orientations on a directed path") {
  GraphView g = build_graph(3, {{0, 1}, {1, 2}}, true);
  std::vector<Vertex> b1{1};
  CHECK(boundary(g, b1, BoundaryMode::Plus) == std::vector<Vertex>{2});
  CHECK(boundary(g, b1, BoundaryMode::Minus) == std::vector<Vertex>{0});
  CHECK(boundary(g, b1, BoundaryMode::Both) == std::vector<Vertex>{0, 2});
}

TEST_CASE("growth profile equals the oracle on assorted graphs") {
  auto check_profile = [](const GraphView& g, std::uint32_t r_max) {
    GrowthProfile p = growth_profile(g, r_max);
    oracles::ProfileOracle o = oracles::profile_oracle(g, r_max);
    CHECK(p.delta == o.delta);
    CHECK(p.c[0] == 0);
    CHECK(p.s[0] == 1);
    for (std::uint32_t r = 0; r <= r_max; ++r) {
      CHECK(p.c[r] == o.c[r]);
      CHECK(p.s[r] == o.s[r]);
      CHECK(p.c_top[r] == o.c_top[r]);
      CHECK(p.s_top[r] == o.s_top[r]);
    }
  };
  check_profile(z_window(1, 6, 3), 3);
  check_profile(z_window(2, 3, 2), 2);
  check_profile(oriented_tree_ball(2, 3, 2), 2);
  check_profile(oracles::random_digraph(50, 2, 3), 4);
  check_profile(oracles::random_digraph(50, 3, 19, false), 3);
}

TEST_CASE("windowed profiles refuse depths beyond the halo") {
  GraphView g = z_window(1, 5, 2);
  CHECK_THROWS_AS((void)growth_profile(g, 3), std::invalid_argument);
  CHECK_NOTHROW((void)growth_profile(g, 2));
}

TEST_CASE("edge list round trip and parse errors") {
  const char* path = "test_edges.txt";
  {
    std::ofstream out(path);
    out << "directed\n0 1\n1 2\n2 0\n";
  }
  GraphView g = edge_list(path);
  CHECK(g.n == 3);
  CHECK(g.directed);
  CHECK(g.out[2] == std::vector<Vertex>{0});
  {
    std::ofstream out(path);
    out << "directed\n0 x\n";
  }
  CHECK_THROWS_WITH_AS((void)edge_list(path),
                       doctest::Contains("line 2"), std::runtime_error);
  std::remove(path);
}
