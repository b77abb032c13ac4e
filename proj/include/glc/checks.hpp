#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glc/factor_graph.hpp"
#include "glc/regions.hpp"

namespace glc {

/// Square blocks of side `block` tiling an n x n grid (n divisible by block).
RegionCollection grid_blocks(const FactorGraph& g, std::size_t n, std::size_t block);

struct BlockMappingCheck {
  bool gbp_converged = false;
  std::size_t gbp_iterations = 0;
  double gbp_residual = 0.0;
  double glc_residual = 0.0;
};

/// GBP on the block construction of a pairwise grid, then the consistency
/// residual of the GLC state m := μ^is.
BlockMappingCheck check_block_mapping(const FactorGraph& g, const RegionCollection& partition, double tolerance = 1e-10);

struct LbpMappingCheck {
  std::uint64_t seed = 0;  // seed of the accepted graph
  std::size_t attempts = 0;
  std::size_t girth = 0;
  std::size_t lbp_iterations = 0;
  double residual = 0.0;
};

/// Draws regular Ising graphs until one has girth >= min_girth and a
/// converged LBP run, then maps the LBP messages to GLC messages on the
/// single-variable partition and returns the consistency residual.
LbpMappingCheck check_lbp_mapping(std::size_t n, double beta, std::uint64_t seed, std::size_t min_girth = 5,
                                 double tolerance = 1e-12, std::size_t max_attempts = 1000);

struct ExactnessCheck {
  bool converged = false;
  double avg_error = 0.0;
  double max_error = 0.0;
};

/// Single-variable GLC on a model with clamped cavities (exact or LBP),
/// compared with variable elimination.
ExactnessCheck check_exactness(const FactorGraph& g, bool exact_cavity, double tolerance = 1e-12);

}  // namespace glc
