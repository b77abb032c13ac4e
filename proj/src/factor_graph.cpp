#include "glc/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "glc/error.hpp"

namespace glc {

FactorGraph::FactorGraph(std::vector<std::size_t> cards, std::vector<Table> factors, double log_constant)
    : cards_(std::move(cards)), factors_(std::move(factors)), var_factors_(cards_.size()),
      log_constant_(log_constant) {
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (cards_[i] == 0) throw Error("variable " + std::to_string(i) + " has an empty domain");
  }
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    Table& t = factors_[f];
    for (std::size_t k = 0; k < t.scope().size(); ++k) {
      const VariableId v = t.scope()[k];
      if (v < 0 || static_cast<std::size_t>(v) >= cards_.size())
        throw Error("factor " + std::to_string(f) + " references unknown variable " + std::to_string(v));
      if (t.cards()[k] != cards_[static_cast<std::size_t>(v)])
        throw Error("factor " + std::to_string(f) + " disagrees on the cardinality of variable " +
                    std::to_string(v));
      var_factors_[static_cast<std::size_t>(v)].push_back(static_cast<FactorId>(f));
    }
    if (!(t.values() >= 0.0).all() || !t.values().allFinite())
      throw Error("factor " + std::to_string(f) + " has a negative or non-finite entry");
    if (!(t.values() > 0.0).any()) throw Error("factor " + std::to_string(f) + " is identically zero");
    // Internal factors carry no log-scale; fold it into the graph constant.
    if (t.log_scale() != 0.0) {
      log_constant_ += t.log_scale();
      t.set_log_scale(0.0);
    }
  }
}

std::vector<std::size_t> FactorGraph::cards_of(const VarSet& vars) const {
  std::vector<std::size_t> out;
  out.reserve(vars.size());
  for (VariableId v : vars) out.push_back(cardinality(v));
  return out;
}

double FactorGraph::log_state_count() const {
  double s = 0.0;
  for (std::size_t c : cards_) s += std::log(static_cast<double>(c));
  return s;
}

double product_eval(const FactorGraph& g, const FactorSet& factor_set, const Assignment& a) {
  double p = 1.0;
  for (FactorId f : factor_set) {
    const Table& t = g.factor(f);
    p *= t[t.index_of(a)];
  }
  return p;
}

double product_eval(const FactorGraph& g, const FactorSet& factor_set,
                    std::span<const std::size_t> full_assignment) {
  if (full_assignment.size() < g.num_variables()) throw Error("uncovered scope");
  double p = 1.0;
  for (FactorId f : factor_set) {
    const Table& t = g.factor(f);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < t.scope().size(); ++k) {
      const std::size_t value = full_assignment[static_cast<std::size_t>(t.scope()[k])];
      if (value >= t.cards()[k]) throw Error("assignment value out of domain");
      idx = idx * t.cards()[k] + value;
    }
    p *= t[idx];
  }
  return p;
}

Table factor_product(const FactorGraph& g, const FactorSet& factor_set) {
  Table out;
  for (FactorId f : factor_set) out = out * g.factor(f);
  return out;
}

std::vector<VariableId> remaining_variables(const FactorGraph& g, const Assignment& a) {
  std::vector<VariableId> kept;
  for (std::size_t v = 0; v < g.num_variables(); ++v) {
    if (!a.contains(static_cast<VariableId>(v))) kept.push_back(static_cast<VariableId>(v));
  }
  return kept;
}

FactorGraph clamp(const FactorGraph& g, const Assignment& a) {
  for (const auto& [v, value] : a) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.num_variables())
      throw Error("clamped variable " + std::to_string(v) + " does not exist");
    if (value >= g.cardinality(v))
      throw Error("clamped value out of domain for variable " + std::to_string(v));
  }
  if (a.empty()) return g;
  const auto kept = remaining_variables(g, a);
  std::vector<VariableId> new_id(g.num_variables(), -1);
  std::vector<std::size_t> cards;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    new_id[static_cast<std::size_t>(kept[k])] = static_cast<VariableId>(k);
    cards.push_back(g.cardinality(kept[k]));
  }
  double log_constant = g.log_constant();
  std::vector<Table> factors;
  for (const Table& f : g.factors()) {
    Table s = slice(f, a);
    if (s.is_scalar()) {
      // A zero here makes the whole clamped model vanish.
      log_constant += std::log(s[0]);
      continue;
    }
    VarSet scope;
    for (VariableId v : s.scope()) scope.push_back(new_id[static_cast<std::size_t>(v)]);
    factors.emplace_back(std::move(scope), s.cards(), s.values());
  }
  // Factors that become identically zero are kept out of the graph and
  // reflected as log_constant = -inf.
  std::vector<Table> nonzero;
  for (Table& t : factors) {
    if ((t.values() > 0.0).any()) {
      nonzero.push_back(std::move(t));
    } else {
      log_constant = -std::numeric_limits<double>::infinity();
    }
  }
  return FactorGraph(std::move(cards), std::move(nonzero), log_constant);
}

FactorGraph remove_factors(const FactorGraph& g, const FactorSet& drop) {
  std::vector<Table> kept;
  for (std::size_t f = 0; f < g.num_factors(); ++f) {
    if (!std::binary_search(drop.begin(), drop.end(), static_cast<FactorId>(f)))
      kept.push_back(g.factors()[f]);
  }
  return FactorGraph(g.cards(), std::move(kept), g.log_constant());
}

FactorSet factors_touching(const FactorGraph& g, const VarSet& vars) {
  FactorSet out;
  for (VariableId v : vars) {
    const auto& n = g.neighbors(v);
    out.insert(out.end(), n.begin(), n.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VarSet scope_union(const FactorGraph& g, const FactorSet& factor_set) {
  VarSet out;
  for (FactorId f : factor_set) out = set_union(out, g.scope(f));
  return out;
}

FactorSet factor_set_intersection(const FactorSet& a, const FactorSet& b) {
  FactorSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

FactorSet factor_set_difference(const FactorSet& a, const FactorSet& b) {
  FactorSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

FactorGraph scale_factor(const FactorGraph& g, FactorId f, double c) {
  if (!(c > 0.0)) throw Error("scale must be positive");
  std::vector<Table> factors = g.factors();
  factors[static_cast<std::size_t>(f)].values() *= c;
  return FactorGraph(g.cards(), std::move(factors), g.log_constant());
}

}  // namespace glc
