#include "doctest.h"
#include "fixtures.hpp"
#include "glc/cavity.hpp"
#include "glc/error.hpp"
#include "glc/generators.hpp"
#include "glc/serialize.hpp"

using namespace glc;
using namespace fixtures;

namespace {

// Marginal over `keep` of the joint of g without `drop`, by enumeration.
std::vector<double> reduced_marginal(const FactorGraph& g, const FactorSet& drop, const VarSet& keep) {
  const FactorGraph reduced = remove_factors(g, drop);
  std::size_t size = 1;
  for (VariableId x : keep) size *= g.cardinality(x);
  std::vector<double> out(size, 0.0);
  double z = 0.0;
  enumerate(reduced, [&](const std::vector<std::size_t>& x, double wgt) {
    std::size_t idx = 0;
    for (VariableId y : keep) idx = idx * g.cardinality(y) + x[static_cast<std::size_t>(y)];
    out[idx] += wgt;
    z += wgt;
  });
  for (double& p : out) p /= z;
  return out;
}

}  // namespace

TEST_CASE("make_region derived sets") {
  const FactorGraph g = example_graph();
  const CavityRegion r1 = make_region(g, {j, s, k});
  CHECK(r1.factors == FactorSet{I, T, S, W, Y, K});
  CHECK(r1.perimeter == make_varset({o, i, m, t, u, v, w}));
  CHECK(r1.plus == make_varset({i, j, k, s, o, m, t, u, v, w}));
  CHECK_THROWS_WITH_AS(make_region(g, {o, v}), "not a cavity region", Error);

  const FactorGraph isolated({2, 2, 2}, {Table::constant({0, 1}, {2, 2}, 1.0)});
  const CavityRegion lone = make_region(isolated, {2});
  CHECK(lone.perimeter.empty());
  CHECK(lone.factors.empty());
}

TEST_CASE("derived sets match an incidence scan") {
  const FactorGraph g = gen_ising_grid(4, false, 1.0, 1);
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    // Random connected 3-subset: a seed plus two grid-neighbour steps.
    VarSet members{static_cast<VariableId>(rng.index(16))};
    while (members.size() < 3) {
      const VariableId from = members[rng.index(members.size())];
      const auto nbrs = interaction_edges(g);
      std::vector<VariableId> cand;
      for (auto [a, b] : nbrs) {
        if (a == from && !contains(members, b)) cand.push_back(b);
        if (b == from && !contains(members, a)) cand.push_back(a);
      }
      if (!cand.empty()) members = make_varset(set_union(members, {cand[rng.index(cand.size())]}));
    }
    const CavityRegion r = make_region(g, members);
    FactorSet n;
    VarSet plus;
    for (std::size_t f = 0; f < g.num_factors(); ++f) {
      bool touches = false;
      for (VariableId x : g.factors()[f].scope()) touches = touches || contains(members, x);
      if (!touches) continue;
      n.push_back(static_cast<FactorId>(f));
      for (VariableId x : g.factors()[f].scope()) plus.push_back(x);
    }
    plus = make_varset(plus);
    CHECK(r.factors == n);
    CHECK(r.plus == plus);
    CHECK(r.perimeter == set_difference(plus, members));
  }
}

TEST_CASE("cavity_uniform") {
  const FactorGraph g = example_graph();
  const CavityTable c = cavity_uniform(g, make_region(g, {j, s, k}));
  CHECK(c.provenance == CavityProvenance::uniform);
  CHECK(c.table.size() == 128);
  CHECK((c.table.values() == 1.0 / 128.0).all());

  const FactorGraph pair = pairwise_graph(3, {{0, 1}, {1, 2}}, 1);
  const CavityTable p = cavity_uniform(pair, make_region(pair, {1}));
  CHECK((p.table.values() == 0.25).all());

  const FactorGraph iso({2}, {});
  CHECK(cavity_uniform(iso, make_region(iso, {0})).table.is_scalar());
}

TEST_CASE("cavity_estimate_clamp") {
  SUBCASE("tree remainder: lbp equals exact") {
    const FactorGraph g = pairwise_graph(8, cycle_edges(8), 5);
    for (VariableId x : {0, 3, 6}) {
      const CavityRegion r = make_region(g, {x});
      CavityOptions lbp;
      CavityOptions ex;
      ex.method = ClampMethod::exact;
      const CavityTable a = cavity_estimate_clamp(g, r, lbp);
      const CavityTable b = cavity_estimate_clamp(g, r, ex);
      CHECK(a.provenance == CavityProvenance::clamped_lbp);
      CHECK(b.provenance == CavityProvenance::clamped_exact);
      CHECK(max_abs_diff(a.table, b.table) <= 1e-8);
    }
  }
  SUBCASE("no factors left gives a uniform table") {
    const FactorGraph g = pairwise_graph(3, {{0, 1}, {1, 2}}, 6);
    const CavityTable c = cavity_estimate_clamp(g, make_region(g, {1}));
    // Only the unary factors of the perimeter survive.
    const Table expect = normalized(g.factor(0) * g.factor(2));
    CHECK(max_abs_diff(c.table, expect) <= 1e-12);
  }
  SUBCASE("single-variable region on an 8-cycle") {
    const FactorGraph g = gen_ising_cycle(8, 1.0, 9);
    const CavityRegion r = make_region(g, {4});
    CavityOptions ex;
    ex.method = ClampMethod::exact;
    const CavityTable c = cavity_estimate_clamp(g, r, ex);
    CHECK(max_diff(c.table, reduced_marginal(g, r.factors, r.perimeter)) <= 1e-12);
  }
  SUBCASE("guard") {
    const FactorGraph g = gen_ising_grid(4, true, 1.0, 2);
    CavityOptions tight;
    tight.max_assignments = 8;
    CHECK_THROWS_WITH_AS(cavity_estimate_clamp(g, make_region(g, {0}), tight), "perimeter too large", Error);
  }
}

TEST_CASE("exact clamping matches the cavity definition on random graphs") {
  Rng rng(123);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 6 + rng.index(9);
    std::vector<std::pair<VariableId, VariableId>> edges;
    for (std::size_t a = 1; a < n; ++a) edges.emplace_back(static_cast<VariableId>(rng.index(a)), static_cast<VariableId>(a));
    for (int extra = 0; extra < 4; ++extra) {
      auto a = static_cast<VariableId>(rng.index(n)), b = static_cast<VariableId>(rng.index(n));
      if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    const FactorGraph g = pairwise_graph(n, edges, rng.next_u64());
    const CavityRegion r = make_region(g, {static_cast<VariableId>(rng.index(n))});
    CavityOptions ex;
    ex.method = ClampMethod::exact;
    ex.threads = 2;
    const CavityTable c = cavity_estimate_clamp(g, r, ex);
    CHECK(max_diff(c.table, reduced_marginal(g, r.factors, r.perimeter)) <= 1e-9);
  }
}

TEST_CASE("cavity json round trip") {
  const FactorGraph g = gen_ising_cycle(6, 1.0, 2);
  const CavityRegion r = make_region(g, {2});
  const CavityTable c = cavity_estimate_clamp(g, r);
  const CavityTable back = cavity_from_json(json::parse(cavity_to_json(r, c).dump()), r);
  CHECK(back.provenance == c.provenance);
  CHECK(max_abs_diff(back.table, c.table) <= 1e-15);
  CHECK_THROWS_AS(cavity_from_json(cavity_to_json(r, c), make_region(g, {3})), Error);
}
