#include "glc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "glc/error.hpp"

namespace glc {

std::vector<Edge> grid_edges(std::size_t n, bool periodic) {
  if (n < 2) throw Error("grid side must be at least 2");
  std::set<Edge> seen;
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    Edge e{static_cast<VariableId>(std::min(a, b)), static_cast<VariableId>(std::max(a, b))};
    if (a != b && seen.insert(e).second) edges.push_back(e);
  };
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t v = r * n + c;
      if (c + 1 < n || periodic) add(v, r * n + (c + 1) % n);
      if (r + 1 < n || periodic) add(v, ((r + 1) % n) * n + c);
    }
  }
  return edges;
}

FactorGraph ising_model(std::size_t n_vars, const std::vector<Edge>& edges, Rng& rng, double field_std,
                        double coupling_std) {
  std::vector<Table> factors;
  for (std::size_t i = 0; i < n_vars; ++i) {
    const double theta = rng.normal(0.0, field_std);
    Eigen::ArrayXd v(2);
    v << std::exp(-theta), std::exp(theta);
    factors.emplace_back(VarSet{static_cast<VariableId>(i)}, std::vector<std::size_t>{2}, v);
  }
  for (const auto& [a, b] : edges) {
    const double j = rng.normal(0.0, coupling_std);
    Eigen::ArrayXd v(4);
    v << std::exp(j), std::exp(-j), std::exp(-j), std::exp(j);
    factors.emplace_back(make_varset({a, b}), std::vector<std::size_t>{2, 2}, v);
  }
  return FactorGraph(std::vector<std::size_t>(n_vars, 2), std::move(factors));
}

FactorGraph gen_ising_grid(std::size_t n, bool periodic, double beta, std::uint64_t seed, double field_std) {
  Rng rng(seed);
  return ising_model(n * n, grid_edges(n, periodic), rng, field_std, beta);
}

FactorGraph gen_random_table_grid(std::size_t n, bool periodic, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Table> factors;
  for (const auto& [a, b] : grid_edges(n, periodic)) {
    Eigen::ArrayXd v(4);
    for (Eigen::Index k = 0; k < 4; ++k) v[k] = std::exp(rng.normal());
    factors.emplace_back(make_varset({a, b}), std::vector<std::size_t>{2, 2}, v);
  }
  return FactorGraph(std::vector<std::size_t>(n * n, 2), std::move(factors));
}

std::vector<Edge> random_regular_edges(std::size_t n, std::size_t degree, std::uint64_t seed, std::size_t max_attempts) {
  if ((n * degree) % 2 != 0 || n <= degree) throw Error("no simple regular graph with these parameters");
  for (std::uint64_t round = 0;; ++round) {
    Rng rng = Rng::stream(seed, round);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      std::vector<VariableId> points;
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t k = 0; k < degree; ++k) points.push_back(static_cast<VariableId>(v));
      rng.shuffle(points);
      std::set<Edge> edges;
      bool ok = true;
      for (std::size_t k = 0; k < points.size() && ok; k += 2) {
        const VariableId a = std::min(points[k], points[k + 1]);
        const VariableId b = std::max(points[k], points[k + 1]);
        ok = a != b && edges.insert({a, b}).second;
      }
      if (ok) return {edges.begin(), edges.end()};
    }
  }
}

FactorGraph gen_regular_ising(std::size_t n, std::size_t degree, double beta, std::uint64_t seed,
                              std::optional<double> field_std) {
  const auto edges = random_regular_edges(n, degree, seed);
  Rng rng = Rng::stream(seed, 0x15146);
  return ising_model(n, edges, rng, field_std.value_or(beta), beta);
}

std::size_t girth(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(static_cast<std::size_t>(b));
    adj[static_cast<std::size_t>(b)].push_back(static_cast<std::size_t>(a));
  }
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<long> dist(n, -1);
    std::vector<long> parent(n, -1);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t w : adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = static_cast<long>(u);
          queue.push_back(w);
        } else if (parent[u] != static_cast<long>(w)) {
          const auto len = static_cast<std::size_t>(dist[u] + dist[w] + 1);
          if (best == 0 || len < best) best = len;
        }
      }
    }
  }
  return best;
}

FactorGraph gen_random_tree(std::size_t n, std::size_t min_card, std::size_t max_card, std::uint64_t seed) {
  if (n == 0 || min_card == 0 || max_card < min_card) throw Error("invalid tree parameters");
  Rng rng(seed);
  std::vector<std::size_t> cards(n);
  for (auto& c : cards) c = min_card + rng.index(max_card - min_card + 1);
  auto random_table = [&](VarSet scope) {
    std::vector<std::size_t> cs;
    std::size_t size = 1;
    for (VariableId v : scope) {
      cs.push_back(cards[static_cast<std::size_t>(v)]);
      size *= cs.back();
    }
    Eigen::ArrayXd values(static_cast<Eigen::Index>(size));
    for (Eigen::Index k = 0; k < values.size(); ++k) values[k] = std::exp(rng.normal());
    return Table(std::move(scope), std::move(cs), std::move(values));
  };
  std::vector<Table> factors;
  for (std::size_t v = 0; v < n; ++v) factors.push_back(random_table({static_cast<VariableId>(v)}));
  for (std::size_t v = 1; v < n; ++v) {
    const auto parent = static_cast<VariableId>(rng.index(v));
    factors.push_back(random_table(make_varset({parent, static_cast<VariableId>(v)})));
  }
  return FactorGraph(cards, std::move(factors));
}

FactorGraph gen_ising_cycle(std::size_t n, double beta, std::uint64_t seed) {
  if (n < 3) throw Error("cycle needs at least 3 variables");
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    const auto a = static_cast<VariableId>(v);
    const auto b = static_cast<VariableId>((v + 1) % n);
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  Rng rng(seed);
  return ising_model(n, edges, rng, 1.0, beta);
}

std::vector<Edge> interaction_edges(const FactorGraph& g) {
  std::set<Edge> edges;
  for (const Table& f : g.factors())
    for (std::size_t a = 0; a < f.scope().size(); ++a)
      for (std::size_t b = a + 1; b < f.scope().size(); ++b) edges.insert({f.scope()[a], f.scope()[b]});
  return {edges.begin(), edges.end()};
}

}  // namespace glc
