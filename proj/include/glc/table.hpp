#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

namespace glc {

using VariableId = std::int32_t;
using FactorId = std::int32_t;

/// Sorted, duplicate-free list of variable ids. Every table scope uses this
/// canonical (ascending id) order.
using VarSet = std::vector<VariableId>;

/// Partial assignment: variable id -> value index.
using Assignment = std::map<VariableId, std::size_t>;

VarSet make_varset(std::vector<VariableId> ids);
VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& sub, const VarSet& super);
bool contains(const VarSet& s, VariableId v);

/// Dense non-negative table over a canonical scope.
///
/// Entries are stored row-major over the scope order (the last variable
/// varies fastest). The represented function is values() * exp(log_scale()),
/// which keeps long products of factors inside double range.
class Table {
 public:
  /// Scalar table with value 1.
  Table();
  Table(VarSet scope, std::vector<std::size_t> cards, Eigen::ArrayXd values,
        double log_scale = 0.0);

  static Table constant(VarSet scope, std::vector<std::size_t> cards, double value);
  static Table uniform(VarSet scope, std::vector<std::size_t> cards);

  /// Builds a table whose entries are given row-major over an arbitrary
  /// (possibly unsorted) scope order, permuting into canonical order.
  static Table from_ordered(const std::vector<VariableId>& order,
                            const std::vector<std::size_t>& order_cards,
                            const std::vector<double>& entries);

  const VarSet& scope() const { return scope_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  bool is_scalar() const { return scope_.empty(); }

  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() {
    normalized_ = false;
    return values_;
  }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  double log_scale() const { return log_scale_; }
  void set_log_scale(double s) { log_scale_ = s; }

  bool normalized() const { return normalized_; }

  std::size_t cardinality(VariableId v) const;

  /// Sum of stored entries, ignoring the log-scale.
  double sum() const { return values_.sum(); }
  /// log of the represented total mass, including the log-scale.
  double log_sum() const;

  /// Row-major index of the entry selected by an assignment covering the scope.
  std::size_t index_of(const Assignment& a) const;
  /// Per-variable value indices of a row-major entry index.
  std::vector<std::size_t> digits(std::size_t index) const;

  /// Entries of the table with a different scope ordering, row-major.
  std::vector<double> entries_in_order(const std::vector<VariableId>& order) const;

 private:
  friend Table normalized(Table t);

  VarSet scope_;
  std::vector<std::size_t> cards_;
  Eigen::ArrayXd values_;
  double log_scale_ = 0.0;
  bool normalized_ = false;
};

/// Index map from every entry of a table over (scope, cards) to the entry of
/// a table over sub_scope ⊆ scope that agrees on the shared variables.
std::vector<Eigen::Index> project_index(const VarSet& scope, const std::vector<std::size_t>& cards,
                                        const VarSet& sub_scope);

/// Returns t scaled to unit mass with log_scale 0. Throws Error on zero mass.
Table normalized(Table t);

/// Pulls the largest entry into the log-scale so values stay near 1.
Table rescaled(Table t);

Table operator*(const Table& a, const Table& b);

/// Entry-wise num / den with den's scope ⊆ num's scope. 0/0 is taken as 0;
/// a positive entry over a zero divisor throws ConfigError.
Table divide(const Table& num, const Table& den);

/// Sums out every variable not in keep. keep must be a subset of the scope.
Table marginalize(const Table& t, const VarSet& keep);

/// Entry-wise power. Zero entries stay zero for any exponent.
Table power(const Table& t, double exponent);

/// Fixes the assigned variables that appear in the scope and drops them.
Table slice(const Table& t, const Assignment& a);

/// Max-norm distance between two tables over the same scope (values only).
double max_abs_diff(const Table& a, const Table& b);

}  // namespace glc
