#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glc/table.hpp"

namespace glc {

using FactorSet = std::vector<FactorId>;  // ascending, unique

/// Discrete factor graph: variables with finite domains and non-negative
/// tabular factors over canonical scopes. Immutable after construction.
///
/// log_constant() is a multiplicative constant exp(c) on the whole product;
/// it collects factors that lost their entire scope to clamping.
class FactorGraph {
 public:
  FactorGraph() = default;
  FactorGraph(std::vector<std::size_t> cards, std::vector<Table> factors, double log_constant = 0.0);

  std::size_t num_variables() const { return cards_.size(); }
  std::size_t num_factors() const { return factors_.size(); }
  std::size_t cardinality(VariableId v) const { return cards_[static_cast<std::size_t>(v)]; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  std::vector<std::size_t> cards_of(const VarSet& vars) const;

  const Table& factor(FactorId f) const { return factors_[static_cast<std::size_t>(f)]; }
  const std::vector<Table>& factors() const { return factors_; }
  const VarSet& scope(FactorId f) const { return factor(f).scope(); }

  /// N(i): factors whose scope contains variable i.
  const FactorSet& neighbors(VariableId v) const { return var_factors_[static_cast<std::size_t>(v)]; }

  double log_constant() const { return log_constant_; }

  /// log of prod_i |X_i| over all variables.
  double log_state_count() const;

 private:
  std::vector<std::size_t> cards_;
  std::vector<Table> factors_;
  std::vector<FactorSet> var_factors_;
  double log_constant_ = 0.0;
};

/// Product of the selected factors at an assignment covering their scopes.
double product_eval(const FactorGraph& g, const FactorSet& factor_set, const Assignment& a);
double product_eval(const FactorGraph& g, const FactorSet& factor_set,
                    std::span<const std::size_t> full_assignment);

/// Product of the selected factors as a single table (scalar 1 if empty).
Table factor_product(const FactorGraph& g, const FactorSet& factor_set);

/// Slices every factor at the assigned values and drops the assigned
/// variables. Remaining variables are renumbered densely in ascending order
/// of their old ids (see remaining_variables). Factors left with an empty
/// scope are folded into log_constant().
FactorGraph clamp(const FactorGraph& g, const Assignment& a);

/// Old ids of the variables that survive clamp(g, a), indexed by new id.
std::vector<VariableId> remaining_variables(const FactorGraph& g, const Assignment& a);

/// Same graph without the dropped factors. Variables are kept even when
/// they become isolated.
FactorGraph remove_factors(const FactorGraph& g, const FactorSet& drop);

/// N(r) = factors touching any variable of r.
FactorSet factors_touching(const FactorGraph& g, const VarSet& vars);

/// Union of the scopes of a factor set.
VarSet scope_union(const FactorGraph& g, const FactorSet& factor_set);

FactorSet factor_set_intersection(const FactorSet& a, const FactorSet& b);
FactorSet factor_set_difference(const FactorSet& a, const FactorSet& b);

/// Returns a copy with factor f multiplied by a positive constant.
FactorGraph scale_factor(const FactorGraph& g, FactorId f, double c);

}  // namespace glc
