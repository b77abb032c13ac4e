#include "glc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "glc/error.hpp"

namespace glc {

namespace {

constexpr std::size_t kEnumerationLimit = std::size_t{1} << 24;

std::size_t state_count(const FactorGraph& g) {
  std::size_t n = 1;
  for (std::size_t c : g.cards()) {
    if (n > kEnumerationLimit / c) throw Error("too large for enumeration");
    n *= c;
  }
  return n;
}

// Unnormalized joint over all variables (scope 0..N-1), row-major.
Table unnormalized_joint(const FactorGraph& g) {
  const std::size_t n = state_count(g);
  VarSet scope(g.num_variables());
  std::iota(scope.begin(), scope.end(), 0);
  FactorSet all(g.num_factors());
  std::iota(all.begin(), all.end(), 0);
  Eigen::ArrayXd values(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> digit(g.num_variables(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    values[static_cast<Eigen::Index>(i)] = product_eval(g, all, digit);
    for (std::size_t k = digit.size(); k-- > 0;) {
      if (++digit[k] < g.cards()[k]) break;
      digit[k] = 0;
    }
  }
  return Table(std::move(scope), g.cards(), std::move(values), g.log_constant());
}

std::size_t table_entries(const FactorGraph& g, const VarSet& scope) {
  std::size_t n = 1;
  for (VariableId v : scope) {
    const std::size_t c = g.cardinality(v);
    if (n > std::numeric_limits<std::size_t>::max() / c) return std::numeric_limits<std::size_t>::max();
    n *= c;
  }
  return n;
}

}  // namespace

Table brute_force_joint(const FactorGraph& g) { return normalized(unnormalized_joint(g)); }

double brute_force_log_z(const FactorGraph& g) { return unnormalized_joint(g).log_sum(); }

std::vector<VariableId> min_fill_order(const FactorGraph& g, const VarSet& keep) {
  const std::size_t n = g.num_variables();
  std::vector<std::set<VariableId>> adj(n);
  for (const Table& f : g.factors()) {
    for (VariableId a : f.scope())
      for (VariableId b : f.scope())
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
  }
  std::vector<bool> done(n, false);
  std::vector<VariableId> order;
  for (std::size_t step = 0; step < n; ++step) {
    VariableId best = -1;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || contains(keep, static_cast<VariableId>(v))) continue;
      std::size_t fill = 0;
      const auto& nb = adj[v];
      for (auto a = nb.begin(); a != nb.end(); ++a)
        for (auto b = std::next(a); b != nb.end(); ++b)
          if (!adj[static_cast<std::size_t>(*a)].contains(*b)) ++fill;
      if (fill < best_fill) {
        best_fill = fill;
        best = static_cast<VariableId>(v);
      }
    }
    if (best < 0) break;
    const auto nb = adj[static_cast<std::size_t>(best)];
    for (VariableId a : nb) {
      for (VariableId b : nb)
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
      adj[static_cast<std::size_t>(a)].erase(best);
    }
    adj[static_cast<std::size_t>(best)].clear();
    done[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
  }
  return order;
}

EliminationResult variable_elimination(const FactorGraph& g, const VarSet& query_in,
                                       const EliminationOptions& opts) {
  const VarSet query = make_varset(query_in);
  for (VariableId v : query) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.num_variables()) throw Error("query variable out of range");
  }
  std::vector<VariableId> order;
  if (opts.order == OrderPolicy::min_fill) {
    order = min_fill_order(g, query);
  } else {
    for (std::size_t v = 0; v < g.num_variables(); ++v)
      if (!contains(query, static_cast<VariableId>(v))) order.push_back(static_cast<VariableId>(v));
  }

  std::vector<Table> pool;
  pool.reserve(g.num_factors());
  for (const Table& f : g.factors()) pool.push_back(rescaled(f));
  double log_extra = g.log_constant();

  for (VariableId v : order) {
    std::vector<Table> bucket;
    std::vector<Table> rest;
    VarSet scope;
    for (Table& t : pool) {
      if (contains(t.scope(), v)) {
        scope = set_union(scope, t.scope());
        bucket.push_back(std::move(t));
      } else {
        rest.push_back(std::move(t));
      }
    }
    pool = std::move(rest);
    if (bucket.empty()) {
      log_extra += std::log(static_cast<double>(g.cardinality(v)));
      continue;
    }
    if (table_entries(g, scope) > opts.max_table_entries)
      throw Error("elimination width guard exceeded");
    Table product;
    for (const Table& t : bucket) product = product * t;
    pool.push_back(rescaled(marginalize(product, set_difference(scope, VarSet{v}))));
  }

  if (table_entries(g, query) > opts.max_table_entries) throw Error("elimination width guard exceeded");
  Table joint = Table::constant(query, g.cards_of(query), 1.0);
  for (const Table& t : pool) joint = joint * t;

  EliminationResult result;
  result.log_z = joint.log_sum() + log_extra;
  if (!query.empty()) result.marginal = normalized(joint);
  return result;
}

ExactResult exact_marginals(const FactorGraph& g, const EliminationOptions& opts) {
  ExactResult out;
  out.log_z = variable_elimination(g, {}, opts).log_z;
  out.singles.reserve(g.num_variables());
  for (std::size_t v = 0; v < g.num_variables(); ++v)
    out.singles.push_back(variable_elimination(g, {static_cast<VariableId>(v)}, opts).marginal);
  return out;
}

}  // namespace glc
