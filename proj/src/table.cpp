#include "glc/table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "glc/error.hpp"

namespace glc {

VarSet make_varset(std::vector<VariableId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const VarSet& sub, const VarSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool contains(const VarSet& s, VariableId v) { return std::binary_search(s.begin(), s.end(), v); }

namespace {

std::size_t product_of(const std::vector<std::size_t>& cards) {
  return std::accumulate(cards.begin(), cards.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t k = cards.size(); k-- > 1;) strides[k - 1] = strides[k] * cards[k];
  return strides;
}

std::vector<std::size_t> sub_cards(const VarSet& scope, const std::vector<std::size_t>& cards,
                                   const VarSet& sub) {
  std::vector<std::size_t> out;
  out.reserve(sub.size());
  for (VariableId v : sub) {
    auto it = std::lower_bound(scope.begin(), scope.end(), v);
    out.push_back(cards[static_cast<std::size_t>(it - scope.begin())]);
  }
  return out;
}

// Scope and cards of the union of two table scopes.
void merge_scopes(const Table& a, const Table& b, VarSet& scope, std::vector<std::size_t>& cards) {
  scope = set_union(a.scope(), b.scope());
  cards.clear();
  cards.reserve(scope.size());
  for (VariableId v : scope) {
    const std::size_t ca = contains(a.scope(), v) ? a.cardinality(v) : 0;
    const std::size_t cb = contains(b.scope(), v) ? b.cardinality(v) : 0;
    if (ca != 0 && cb != 0 && ca != cb)
      throw Error("cardinality mismatch for variable " + std::to_string(v));
    cards.push_back(ca != 0 ? ca : cb);
  }
}

}  // namespace

Table::Table() : values_(Eigen::ArrayXd::Ones(1)) {}

Table::Table(VarSet scope, std::vector<std::size_t> cards, Eigen::ArrayXd values, double log_scale)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)),
      log_scale_(log_scale) {
  if (!std::is_sorted(scope_.begin(), scope_.end()) ||
      std::adjacent_find(scope_.begin(), scope_.end()) != scope_.end())
    throw Error("table scope must be strictly ascending");
  if (cards_.size() != scope_.size()) throw Error("table scope/cardinality length mismatch");
  if (std::find(cards_.begin(), cards_.end(), std::size_t{0}) != cards_.end())
    throw Error("table cardinality must be >= 1");
  if (static_cast<std::size_t>(values_.size()) != product_of(cards_))
    throw Error("table length does not match the product of scope cardinalities");
}

Table Table::constant(VarSet scope, std::vector<std::size_t> cards, double value) {
  const auto n = static_cast<Eigen::Index>(product_of(cards));
  return Table(std::move(scope), std::move(cards), Eigen::ArrayXd::Constant(n, value));
}

Table Table::uniform(VarSet scope, std::vector<std::size_t> cards) {
  const auto n = product_of(cards);
  Table t = constant(std::move(scope), std::move(cards), 1.0 / static_cast<double>(n));
  t.normalized_ = true;
  return t;
}

Table Table::from_ordered(const std::vector<VariableId>& order,
                          const std::vector<std::size_t>& order_cards,
                          const std::vector<double>& entries) {
  if (order.size() != order_cards.size()) throw Error("scope/cardinality length mismatch");
  if (entries.size() != product_of(order_cards))
    throw Error("table length does not match the product of scope cardinalities");
  VarSet scope = make_varset(order);
  if (scope.size() != order.size()) throw Error("duplicate variable in factor scope");
  std::vector<std::size_t> cards(scope.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto it = std::lower_bound(scope.begin(), scope.end(), order[k]);
    cards[static_cast<std::size_t>(it - scope.begin())] = order_cards[k];
  }
  Table t = constant(scope, cards, 0.0);
  // Entry index of `t` for every entry of the ordered layout.
  const auto strides = strides_of(cards);
  std::vector<std::size_t> stride_in_t(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto it = std::lower_bound(scope.begin(), scope.end(), order[k]);
    stride_in_t[k] = strides[static_cast<std::size_t>(it - scope.begin())];
  }
  std::vector<std::size_t> digit(order.size(), 0);
  std::size_t target = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    t.values_[static_cast<Eigen::Index>(target)] = entries[i];
    for (std::size_t k = order.size(); k-- > 0;) {
      if (++digit[k] < order_cards[k]) {
        target += stride_in_t[k];
        break;
      }
      target -= stride_in_t[k] * (order_cards[k] - 1);
      digit[k] = 0;
    }
  }
  return t;
}

std::size_t Table::cardinality(VariableId v) const {
  auto it = std::lower_bound(scope_.begin(), scope_.end(), v);
  if (it == scope_.end() || *it != v)
    throw Error("variable " + std::to_string(v) + " not in table scope");
  return cards_[static_cast<std::size_t>(it - scope_.begin())];
}

double Table::log_sum() const { return std::log(values_.sum()) + log_scale_; }

std::size_t Table::index_of(const Assignment& a) const {
  const auto strides = strides_of(cards_);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    auto it = a.find(scope_[k]);
    if (it == a.end()) throw Error("uncovered scope");
    if (it->second >= cards_[k]) throw Error("assignment value out of domain");
    idx += it->second * strides[k];
  }
  return idx;
}

std::vector<std::size_t> Table::digits(std::size_t index) const {
  std::vector<std::size_t> d(scope_.size());
  for (std::size_t k = scope_.size(); k-- > 0;) {
    d[k] = index % cards_[k];
    index /= cards_[k];
  }
  return d;
}

std::vector<double> Table::entries_in_order(const std::vector<VariableId>& order) const {
  if (make_varset(order) != scope_) throw Error("ordering is not a permutation of the scope");
  std::vector<std::size_t> order_cards;
  for (VariableId v : order) order_cards.push_back(cardinality(v));
  const auto strides = strides_of(cards_);
  std::vector<std::size_t> stride_here(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto it = std::lower_bound(scope_.begin(), scope_.end(), order[k]);
    stride_here[k] = strides[static_cast<std::size_t>(it - scope_.begin())];
  }
  std::vector<double> out(size());
  std::vector<std::size_t> digit(order.size(), 0);
  std::size_t source = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = values_[static_cast<Eigen::Index>(source)];
    for (std::size_t k = order.size(); k-- > 0;) {
      if (++digit[k] < order_cards[k]) {
        source += stride_here[k];
        break;
      }
      source -= stride_here[k] * (order_cards[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

std::vector<Eigen::Index> project_index(const VarSet& scope, const std::vector<std::size_t>& cards,
                                        const VarSet& sub_scope) {
  const std::size_t n = product_of(cards);
  const auto sub_strides = strides_of(sub_cards(scope, cards, sub_scope));
  std::vector<std::size_t> step(scope.size(), 0);
  for (std::size_t k = 0, j = 0; k < scope.size(); ++k) {
    if (j < sub_scope.size() && sub_scope[j] == scope[k]) step[k] = sub_strides[j++];
  }
  std::vector<Eigen::Index> map(n);
  std::vector<std::size_t> digit(scope.size(), 0);
  std::size_t target = 0;
  for (std::size_t i = 0; i < n; ++i) {
    map[i] = static_cast<Eigen::Index>(target);
    for (std::size_t k = scope.size(); k-- > 0;) {
      if (++digit[k] < cards[k]) {
        target += step[k];
        break;
      }
      target -= step[k] * (cards[k] - 1);
      digit[k] = 0;
    }
  }
  return map;
}

Table normalized(Table t) {
  const double z = t.values_.sum();
  if (!(z > 0.0) || !std::isfinite(z)) throw Error("cannot normalize a table with zero mass");
  t.values_ /= z;
  t.log_scale_ = 0.0;
  t.normalized_ = true;
  return t;
}

Table rescaled(Table t) {
  const double m = t.values().maxCoeff();
  if (m > 0.0 && std::isfinite(m)) {
    t.values() /= m;
    t.set_log_scale(t.log_scale() + std::log(m));
  }
  return t;
}

Table operator*(const Table& a, const Table& b) {
  if (a.scope() == b.scope()) {
    return Table(a.scope(), a.cards(), a.values() * b.values(), a.log_scale() + b.log_scale());
  }
  VarSet scope;
  std::vector<std::size_t> cards;
  merge_scopes(a, b, scope, cards);
  const auto ia = project_index(scope, cards, a.scope());
  const auto ib = project_index(scope, cards, b.scope());
  Eigen::ArrayXd v = a.values()(ia) * b.values()(ib);
  return Table(std::move(scope), std::move(cards), std::move(v), a.log_scale() + b.log_scale());
}

Table divide(const Table& num, const Table& den) {
  if (!is_subset(den.scope(), num.scope())) throw Error("divisor scope must be within dividend scope");
  for (VariableId v : den.scope()) {
    if (den.cardinality(v) != num.cardinality(v))
      throw Error("cardinality mismatch for variable " + std::to_string(v));
  }
  const auto idx = project_index(num.scope(), num.cards(), den.scope());
  Eigen::ArrayXd v(static_cast<Eigen::Index>(num.size()));
  for (std::size_t i = 0; i < num.size(); ++i) {
    const double d = den.values()[idx[i]];
    const double n = num[i];
    if (d > 0.0) {
      v[static_cast<Eigen::Index>(i)] = n / d;
    } else if (n == 0.0) {
      v[static_cast<Eigen::Index>(i)] = 0.0;
    } else {
      throw ConfigError("division by a zero table entry");
    }
  }
  return Table(num.scope(), num.cards(), std::move(v), num.log_scale() - den.log_scale());
}

Table marginalize(const Table& t, const VarSet& keep_in) {
  const VarSet keep = make_varset(keep_in);
  if (!is_subset(keep, t.scope())) throw Error("marginalization target is not within the scope");
  if (keep == t.scope()) return t;
  auto cards = sub_cards(t.scope(), t.cards(), keep);
  const auto idx = project_index(t.scope(), t.cards(), keep);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(product_of(cards)));
  for (std::size_t i = 0; i < idx.size(); ++i) v[idx[i]] += t[i];
  return Table(keep, std::move(cards), std::move(v), t.log_scale());
}

Table power(const Table& t, double exponent) {
  if (exponent == 1.0) return t;
  Eigen::ArrayXd v = (t.values() > 0.0).select(t.values().pow(exponent), 0.0);
  return Table(t.scope(), t.cards(), std::move(v), t.log_scale() * exponent);
}

Table slice(const Table& t, const Assignment& a) {
  VarSet fixed;
  for (VariableId v : t.scope()) {
    auto it = a.find(v);
    if (it == a.end()) continue;
    if (it->second >= t.cardinality(v)) throw Error("assignment value out of domain");
    fixed.push_back(v);
  }
  if (fixed.empty()) return t;
  const VarSet rest = set_difference(t.scope(), fixed);
  auto cards = sub_cards(t.scope(), t.cards(), rest);
  const auto strides = strides_of(t.cards());
  std::size_t offset = 0;
  for (std::size_t k = 0; k < t.scope().size(); ++k) {
    auto it = a.find(t.scope()[k]);
    if (it != a.end()) offset += it->second * strides[k];
  }
  // Walk the remaining variables row-major, accumulating strides of the source.
  std::vector<std::size_t> rest_strides;
  for (std::size_t k = 0; k < t.scope().size(); ++k) {
    if (contains(rest, t.scope()[k])) rest_strides.push_back(strides[k]);
  }
  const std::size_t n = product_of(cards);
  Eigen::ArrayXd v(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> digit(rest.size(), 0);
  std::size_t source = offset;
  for (std::size_t i = 0; i < n; ++i) {
    v[static_cast<Eigen::Index>(i)] = t[source];
    for (std::size_t k = rest.size(); k-- > 0;) {
      if (++digit[k] < cards[k]) {
        source += rest_strides[k];
        break;
      }
      source -= rest_strides[k] * (cards[k] - 1);
      digit[k] = 0;
    }
  }
  return Table(rest, std::move(cards), std::move(v), t.log_scale());
}

double max_abs_diff(const Table& a, const Table& b) {
  if (a.scope() != b.scope() || a.cards() != b.cards())
    throw Error("tables must share a scope to be compared");
  return (a.values() - b.values()).abs().maxCoeff();
}

}  // namespace glc
