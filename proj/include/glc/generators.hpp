#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "glc/factor_graph.hpp"
#include "glc/random.hpp"

namespace glc {

using Edge = std::pair<VariableId, VariableId>;

/// Edges of an n x n 4-neighbour grid, variable id = row * n + col, each
/// edge listed once with the smaller id first.
std::vector<Edge> grid_edges(std::size_t n, bool periodic);

/// Binary Ising model over ±1 spins (state 0 is -1): a unary factor
/// exp(θ_i x_i) for every variable, then a pairwise factor exp(J x_i x_j)
/// for every edge. The fields are drawn first, then the couplings in edge order.
FactorGraph ising_model(std::size_t n_vars, const std::vector<Edge>& edges, Rng& rng, double field_std,
                        double coupling_std);

/// θ ~ N(0, field_std²), J ~ N(0, β²) on an n x n grid.
FactorGraph gen_ising_grid(std::size_t n, bool periodic, double beta, std::uint64_t seed, double field_std = 1.0);

/// Pairwise grid whose factor entries are exp(N(0,1)) draws.
FactorGraph gen_random_table_grid(std::size_t n, bool periodic, std::uint64_t seed);

/// Simple degree-regular graph from the pairing model, rejecting self-loops
/// and repeated edges. After max_attempts rejections the draw restarts from a
/// fresh sub-seed.
std::vector<Edge> random_regular_edges(std::size_t n, std::size_t degree, std::uint64_t seed,
                                       std::size_t max_attempts = 1000);

/// Ising model on a random regular graph. Fields default to N(0, β²).
FactorGraph gen_regular_ising(std::size_t n, std::size_t degree, double beta, std::uint64_t seed,
                              std::optional<double> field_std = std::nullopt);

/// Shortest cycle length of a simple graph, 0 if acyclic.
std::size_t girth(std::size_t n, const std::vector<Edge>& edges);

/// Random tree: each vertex k > 0 attaches to a uniformly chosen earlier
/// vertex. Cardinalities are uniform in [min_card, max_card]; every variable
/// gets a unary factor and every edge a pairwise factor, entries exp(N(0,1)).
FactorGraph gen_random_tree(std::size_t n, std::size_t min_card, std::size_t max_card, std::uint64_t seed);

/// Ising model on a single cycle of n variables, θ ~ N(0,1), J ~ N(0, β²).
FactorGraph gen_ising_cycle(std::size_t n, double beta, std::uint64_t seed);

/// Variable adjacency of a factor graph as an edge list.
std::vector<Edge> interaction_edges(const FactorGraph& g);

}  // namespace glc
