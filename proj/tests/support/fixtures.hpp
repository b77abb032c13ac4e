#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <vector>

#include "glc/factor_graph.hpp"
#include "glc/random.hpp"

namespace fixtures {

using glc::FactorGraph;
using glc::Table;
using glc::VarSet;
using glc::VariableId;

// Letters of the example topology with a loop-rich neighbourhood.
enum Fig : VariableId { i = 0, j, k, s, o, m, t, u, v, w };
enum FigFactor : glc::FactorId { I = 0, T, S, W, Y, K };

inline Table random_table(glc::Rng& rng, VarSet scope, const std::vector<std::size_t>& all_cards) {
  std::vector<std::size_t> cards;
  std::size_t size = 1;
  for (VariableId x : scope) {
    cards.push_back(all_cards[static_cast<std::size_t>(x)]);
    size *= cards.back();
  }
  Eigen::ArrayXd values(static_cast<Eigen::Index>(size));
  for (Eigen::Index e = 0; e < values.size(); ++e) values[e] = 0.2 + rng.uniform();
  return Table(std::move(scope), std::move(cards), std::move(values));
}

inline FactorGraph example_graph(std::uint64_t seed = 7) {
  glc::Rng rng(seed);
  const std::vector<std::size_t> cards(10, 2);
  std::vector<Table> f;
  for (VarSet scope : {VarSet{i, j, k}, VarSet{j, s, w}, VarSet{i, j, o}, VarSet{s, v, w}, VarSet{k, s, u}, VarSet{k, m, t}})
    f.push_back(random_table(rng, scope, cards));
  return FactorGraph(cards, std::move(f));
}

// Random pairwise model on the given edges, plus unary factors.
inline FactorGraph pairwise_graph(std::size_t n, const std::vector<std::pair<VariableId, VariableId>>& edges,
                                  std::uint64_t seed, std::size_t card = 2) {
  glc::Rng rng(seed);
  const std::vector<std::size_t> cards(n, card);
  std::vector<Table> f;
  for (std::size_t x = 0; x < n; ++x) f.push_back(random_table(rng, {static_cast<VariableId>(x)}, cards));
  for (auto [a, b] : edges) f.push_back(random_table(rng, glc::make_varset({a, b}), cards));
  return FactorGraph(cards, std::move(f));
}

inline std::vector<std::pair<VariableId, VariableId>> cycle_edges(std::size_t n) {
  std::vector<std::pair<VariableId, VariableId>> e;
  for (std::size_t x = 0; x < n; ++x) {
    auto a = static_cast<VariableId>(x), b = static_cast<VariableId>((x + 1) % n);
    e.emplace_back(std::min(a, b), std::max(a, b));
  }
  return e;
}

// Enumerates every joint state, last variable fastest, and hands the
// unnormalized weight (direct product of raw table lookups) to `visit`.
inline void enumerate(const FactorGraph& g, const std::function<void(const std::vector<std::size_t>&, double)>& visit) {
  const std::size_t n = g.num_variables();
  std::vector<std::size_t> x(n, 0);
  while (true) {
    double weight = std::exp(g.log_constant());
    for (const Table& f : g.factors()) {
      std::size_t idx = 0;
      for (std::size_t p = 0; p < f.scope().size(); ++p)
        idx = idx * f.cards()[p] + x[static_cast<std::size_t>(f.scope()[p])];
      weight *= f.values()[static_cast<Eigen::Index>(idx)] * std::exp(f.log_scale());
    }
    visit(x, weight);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++x[pos] < g.cardinality(static_cast<VariableId>(pos))) break;
      x[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

inline double oracle_z(const FactorGraph& g) {
  double z = 0.0;
  enumerate(g, [&](const std::vector<std::size_t>&, double wgt) { z += wgt; });
  return z;
}

// Normalized single-variable marginals by enumeration.
inline std::vector<std::vector<double>> oracle_marginals(const FactorGraph& g) {
  std::vector<std::vector<double>> out(g.num_variables());
  for (std::size_t x = 0; x < out.size(); ++x) out[x].assign(g.cardinality(static_cast<VariableId>(x)), 0.0);
  double z = 0.0;
  enumerate(g, [&](const std::vector<std::size_t>& x, double wgt) {
    z += wgt;
    for (std::size_t a = 0; a < x.size(); ++a) out[a][x[a]] += wgt;
  });
  for (auto& m : out)
    for (double& p : m) p /= z;
  return out;
}

inline double max_diff(const Table& t, const std::vector<double>& ref) {
  double worst = 0.0;
  for (std::size_t e = 0; e < ref.size(); ++e) worst = std::max(worst, std::abs(t[e] - ref[e]));
  return worst;
}

// Simple cycles of length 3..max_len by exhaustive search over vertex
// sequences, canonicalized as sorted vertex lists plus rotation-free edge sets.
inline std::size_t count_cycles_brute(std::size_t n, const std::vector<std::pair<VariableId, VariableId>>& edges,
                                      std::size_t max_len) {
  std::set<std::pair<VariableId, VariableId>> adj;
  for (auto [a, b] : edges) {
    adj.insert({a, b});
    adj.insert({b, a});
  }
  std::set<std::set<std::pair<VariableId, VariableId>>> cycles;
  std::vector<VariableId> path;
  std::function<void()> grow = [&] {
    if (path.size() >= 3 && adj.count({path.back(), path.front()})) {
      std::set<std::pair<VariableId, VariableId>> es;
      for (std::size_t p = 0; p < path.size(); ++p) {
        auto a = path[p], b = path[(p + 1) % path.size()];
        es.insert({std::min(a, b), std::max(a, b)});
      }
      cycles.insert(es);
    }
    if (path.size() == max_len) return;
    for (std::size_t x = 0; x < n; ++x) {
      auto c = static_cast<VariableId>(x);
      if (std::find(path.begin(), path.end(), c) != path.end() || !adj.count({path.back(), c})) continue;
      path.push_back(c);
      grow();
      path.pop_back();
    }
  };
  for (std::size_t x = 0; x < n; ++x) {
    path = {static_cast<VariableId>(x)};
    grow();
  }
  return cycles.size();
}

}  // namespace fixtures
