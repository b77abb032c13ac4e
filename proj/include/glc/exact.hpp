#pragma once

#include <cstddef>
#include <vector>

#include "glc/factor_graph.hpp"

namespace glc {

/// Exact log partition function and single-variable marginals.
struct ExactResult {
  double log_z = 0.0;
  std::vector<Table> singles;
};

enum class OrderPolicy { min_fill, natural };

struct EliminationOptions {
  OrderPolicy order = OrderPolicy::min_fill;
  /// Largest intermediate table the elimination may build.
  std::size_t max_table_entries = std::size_t{1} << 26;
};

struct EliminationResult {
  Table marginal;  // normalized, over the query (scalar 1 when the query is empty)
  double log_z = 0.0;
};

/// Full normalized joint by enumeration. Refuses state spaces above 2^24.
Table brute_force_joint(const FactorGraph& g);
/// log Z by enumeration, same guard.
double brute_force_log_z(const FactorGraph& g);

/// Greedy min-fill ordering of the variables outside `keep`; ties go to the
/// lowest id.
std::vector<VariableId> min_fill_order(const FactorGraph& g, const VarSet& keep);

EliminationResult variable_elimination(const FactorGraph& g, const VarSet& query,
                                       const EliminationOptions& opts = {});

/// One elimination per variable.
ExactResult exact_marginals(const FactorGraph& g, const EliminationOptions& opts = {});

}  // namespace glc
