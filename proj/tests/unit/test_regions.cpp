#include "doctest.h"
#include "fixtures.hpp"
#include "glc/error.hpp"
#include "glc/exact.hpp"
#include "glc/generators.hpp"
#include "glc/regions.hpp"
#include "glc/serialize.hpp"
#include "glc/uai.hpp"

using namespace glc;
using namespace fixtures;

namespace {

void check_tables(const FactorGraph& g, const RegionCollection& c) {
  for (std::size_t p = 0; p < c.size(); ++p) {
    CHECK(is_connected_region(g, c.regions[p].members));
    std::vector<int> nb;
    for (std::size_t q = 0; q < c.size(); ++q) {
      if (q == p) continue;
      VarSet x;
      for (VariableId y : c.regions[p].perimeter)
        if (contains(c.regions[q].members, y)) x.push_back(y);
      CHECK(c.intersection(static_cast<int>(p), static_cast<int>(q)) == x);
      if (!x.empty()) nb.push_back(static_cast<int>(q));
    }
    CHECK(c.nb[p] == nb);
  }
}

}  // namespace

TEST_CASE("single-variable partition") {
  const FactorGraph g = example_graph();
  const RegionCollection c = partition_single_variables(g);
  CHECK(c.size() == 10);
  CHECK(c.is_partition);
  CHECK(c.regions[s].perimeter == make_varset({w, j, k, u, v}));
  check_tables(g, c);
  // A partition's perimeter is the disjoint union of its intersections.
  for (std::size_t p = 0; p < c.size(); ++p) {
    std::size_t total = 0;
    VarSet u;
    for (int q : c.nb[p]) {
      total += c.intersection(static_cast<int>(p), q).size();
      u = set_union(u, c.intersection(static_cast<int>(p), q));
    }
    CHECK(total == c.regions[p].perimeter.size());
    CHECK(u == c.regions[p].perimeter);
  }

  const FactorGraph chain = pairwise_graph(3, {{0, 1}, {1, 2}}, 2);
  CHECK(partition_single_variables(chain).regions[1].perimeter == VarSet{0, 2});
}

TEST_CASE("coverage") {
  const FactorGraph g = pairwise_graph(3, {{0, 1}, {1, 2}}, 2);
  CHECK_THROWS_WITH_AS(make_collection(g, {{0, 1}}), "coverage violated", Error);
  const RegionCollection c = make_collection(g, {{0, 1}, {1, 2}, {1, 0}});
  CHECK(c.size() == 2);
  CHECK_FALSE(c.is_partition);
}

TEST_CASE("factor-domain clusters") {
  const FactorGraph one({2, 2}, {Table::constant({0, 1}, {2, 2}, 1.0)});
  const RegionCollection a = clusters_factor_domains(one);
  REQUIRE(a.size() == 1);
  CHECK(a.regions[0].members == VarSet{0, 1});

  const FactorGraph two({2, 2, 2}, {Table::constant({0, 1}, {2, 2}, 1.0), Table::constant({1, 2}, {2, 2}, 1.0)});
  const RegionCollection b = clusters_factor_domains(two);
  REQUIRE(b.size() == 2);
  CHECK(b.nb[0] == std::vector<int>{1});
  CHECK(b.nb[1] == std::vector<int>{0});
  check_tables(two, b);

  // Unary scopes are distinct scopes and get their own regions.
  const FactorGraph grid = gen_ising_grid(3, false, 1.0, 1);
  CHECK(clusters_factor_domains(grid).size() == 9 + 12);
}

TEST_CASE("loop clusters") {
  const FactorGraph tri = pairwise_graph(3, cycle_edges(3), 1);
  const RegionCollection t = clusters_loops(tri, 3);
  REQUIRE(t.size() == 1);
  CHECK(t.regions[0].members == VarSet{0, 1, 2});

  const FactorGraph tree = gen_random_tree(7, 2, 2, 3);
  const RegionCollection tr = clusters_loops(tree, 4);
  CHECK(tr.size() == clusters_factor_domains(tree).size());

  CHECK_THROWS_AS(clusters_loops(tri, 2), Error);

  const auto edges = grid_edges(4, true);
  const FactorGraph grid = gen_ising_grid(4, true, 1.0, 1);
  CHECK(enumerate_cycles(grid, 4).size() == count_cycles_brute(16, edges, 4));
  CHECK(enumerate_cycles(grid, 4).size() == 24);
  const RegionCollection loops = clusters_loops(grid, 4);
  CHECK(loops.size() == 24);
  check_tables(grid, loops);

  const auto small = pairwise_graph(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 2}, {1, 3}}, 5);
  const std::vector<std::pair<VariableId, VariableId>> e = {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 5}, {1, 3}};
  for (std::size_t len = 3; len <= 6; ++len) CHECK(enumerate_cycles(small, len).size() == count_cycles_brute(6, e, len));
}

TEST_CASE("collection json round trip") {
  const FactorGraph g = example_graph();
  const RegionCollection c = clusters_loops(g, 4);
  const RegionCollection back = collection_from_json(g, json::parse(collection_to_json(c).dump()));
  REQUIRE(back.size() == c.size());
  for (std::size_t p = 0; p < c.size(); ++p) {
    CHECK(back.regions[p].members == c.regions[p].members);
    CHECK(back.regions[p].perimeter == c.regions[p].perimeter);
  }
  CHECK(back.nb == c.nb);
}

TEST_CASE("alarm factor domains") {
  const std::string path = std::string(GLC_DATA_DIR) + "/alarm.uai";
  const FactorGraph g = read_uai_file(path);
  CHECK(g.num_variables() == 37);
  CHECK(g.num_factors() == 37);
  CHECK(clusters_factor_domains(g).size() <= 37);
}
