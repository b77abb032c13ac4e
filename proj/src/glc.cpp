#include "glc/glc.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <set>

#include "glc/error.hpp"
#include "glc/random.hpp"

namespace glc {

int PerimeterRegionGraph::top_for_source(int q) const {
  for (int t : tops) {
    if (nodes[static_cast<std::size_t>(t)].source == q) return t;
  }
  return -1;
}

namespace {

bool strict_subset(const VarSet& a, const VarSet& b) { return a.size() < b.size() && is_subset(a, b); }

}  // namespace

PerimeterRegionGraph build_perimeter_region_graph(const FactorGraph& g, const RegionCollection& c, int p) {
  PerimeterRegionGraph prg;
  prg.owner = p;

  // Distinct nonempty ⊖r_{p,q}, each remembering its lowest q.
  std::map<VarSet, int> candidates;
  for (int q : c.nb[static_cast<std::size_t>(p)]) candidates.emplace(c.intersection(p, q), q);

  std::vector<std::pair<VarSet, int>> tops;
  for (const auto& [set, q] : candidates) {
    const bool dominated = std::any_of(candidates.begin(), candidates.end(),
                                       [&](const auto& other) { return strict_subset(set, other.first); });
    if (!dominated) tops.emplace_back(set, q);
  }

  std::set<VarSet> closure;
  for (const auto& t : tops) closure.insert(t.first);
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<VarSet> current(closure.begin(), closure.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        VarSet x = set_intersection(current[i], current[j]);
        if (!x.empty() && closure.insert(std::move(x)).second) grew = true;
      }
    }
  }

  std::vector<VarSet> subs;
  for (const VarSet& s : closure) {
    if (std::none_of(tops.begin(), tops.end(), [&](const auto& t) { return t.first == s; })) subs.push_back(s);
  }
  std::stable_sort(subs.begin(), subs.end(), [](const VarSet& a, const VarSet& b) { return a.size() > b.size(); });

  for (const auto& [set, q] : tops) {
    PrgNode n;
    n.vars = set;
    n.top = true;
    n.source = q;
    prg.tops.push_back(static_cast<int>(prg.nodes.size()));
    prg.nodes.push_back(std::move(n));
  }
  for (VarSet& s : subs) {
    PrgNode n;
    n.vars = std::move(s);
    prg.nodes.push_back(std::move(n));
  }

  const std::size_t n = prg.nodes.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!strict_subset(prg.nodes[b].vars, prg.nodes[a].vars)) continue;
      bool immediate = true;
      for (std::size_t m = 0; m < n && immediate; ++m) {
        if (strict_subset(prg.nodes[b].vars, prg.nodes[m].vars) && strict_subset(prg.nodes[m].vars, prg.nodes[a].vars))
          immediate = false;
      }
      if (immediate) {
        prg.nodes[a].children.push_back(static_cast<int>(b));
        prg.nodes[b].parents.push_back(static_cast<int>(a));
      }
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    PrgNode& node = prg.nodes[a];
    if (!node.top) {
      double ancestors = 0.0;
      for (std::size_t b = 0; b < a; ++b)
        if (strict_subset(node.vars, prg.nodes[b].vars)) ancestors += prg.nodes[b].counting_number;
      node.counting_number = 1.0 - ancestors;
    }
    node.belief = Table::uniform(node.vars, g.cards_of(node.vars));
    node.effective = node.belief;
  }
  return prg;
}

void downward_pass(PerimeterRegionGraph& prg) {
  for (PrgNode& node : prg.nodes) {
    if (node.top) continue;
    node.from_parents.clear();
    const double exponent = 1.0 / static_cast<double>(node.parents.size());
    Table mean;
    for (int parent : node.parents) {
      Table mu = marginalize(prg.nodes[static_cast<std::size_t>(parent)].belief, node.vars);
      if (!(mu.sum() > 0.0)) throw Error("degenerate parent marginal");
      mu = normalized(std::move(mu));
      mean = mean * power(mu, exponent);
      node.from_parents.push_back(std::move(mu));
    }
    node.belief = normalized(std::move(mean));
  }
}

void upward_pass(PerimeterRegionGraph& prg) {
  for (std::size_t a = prg.nodes.size(); a-- > 0;) {
    PrgNode& node = prg.nodes[a];
    Table eff = node.belief;
    for (int c : node.children) {
      const PrgNode& child = prg.nodes[static_cast<std::size_t>(c)];
      const auto it = std::find(child.parents.begin(), child.parents.end(), static_cast<int>(a));
      const auto slot = static_cast<std::size_t>(it - child.parents.begin());
      if (slot >= child.from_parents.size()) throw Error("upward pass needs a completed downward pass");
      eff = eff * divide(child.effective, child.from_parents[slot]);
    }
    node.effective = normalized(std::move(eff));
  }
}

GlcState::GlcState(const FactorGraph& g, RegionCollection collection, std::vector<CavityTable> cavities,
                   const GlcOptions& opts)
    : graph_(&g), collection_(std::move(collection)), cavities_(std::move(cavities)) {
  const std::size_t m = collection_.size();
  if (cavities_.size() != m) throw Error("one cavity table is required per region");
  for (std::size_t p = 0; p < m; ++p) {
    if (cavities_[p].table.scope() != collection_.regions[p].perimeter)
      throw Error("cavity table scope does not match the region perimeter");
  }
  switch (opts.mode) {
    case GlcMode::automatic:
      partition_mode_ = collection_.is_partition;
      break;
    case GlcMode::partition:
      if (!collection_.is_partition) throw Error("partition mode requires a partitioning collection");
      partition_mode_ = true;
      break;
    case GlcMode::general:
      partition_mode_ = false;
      break;
  }

  if (!opts.allow_zero_factors) {
    for (std::size_t p = 0; p < m; ++p) {
      for (int q : collection_.nb[p]) {
        const FactorSet shared =
            factor_set_intersection(collection_.regions[p].factors, collection_.regions[static_cast<std::size_t>(q)].factors);
        for (FactorId f : shared) {
          if ((g.factor(f).values() <= 0.0).any())
            throw ConfigError("zero entry in divided factor product (factor " + std::to_string(f) + ")");
        }
      }
    }
  }

  prg_.reserve(m);
  base_.reserve(m);
  for (std::size_t p = 0; p < m; ++p) {
    const CavityRegion& r = collection_.regions[p];
    prg_.push_back(build_perimeter_region_graph(g, collection_, static_cast<int>(p)));
    Table base = Table::constant(r.plus, g.cards_of(r.plus), 1.0) * cavities_[p].table;
    base = rescaled(base * factor_product(g, r.factors));
    base_.push_back(std::move(base));
  }
  beliefs_.resize(m);
  weights_.resize(m);
  refresh_all();
}

Table GlcState::node_weight(int p) const {
  Table w;
  for (const PrgNode& node : prg(p).nodes) {
    if (node.counting_number == 0.0) continue;
    w = w * power(node.belief, node.counting_number);
  }
  return w;
}

Table region_belief(const GlcState& s, int p) {
  const CavityRegion& r = s.collection().regions[static_cast<std::size_t>(p)];
  const FactorGraph& g = s.graph();
  Table b = Table::constant(r.plus, g.cards_of(r.plus), 1.0) * s.cavities()[static_cast<std::size_t>(p)].table;
  b = rescaled(b * factor_product(g, r.factors)) * s.node_weight(p);
  if (!(b.sum() > 0.0)) throw Error("degenerate belief");
  return normalized(std::move(b));
}

void GlcState::refresh_belief(int p) {
  weights_[static_cast<std::size_t>(p)] = node_weight(p);
  Table b = base_[static_cast<std::size_t>(p)] * weights_[static_cast<std::size_t>(p)];
  if (!(b.sum() > 0.0)) throw Error("degenerate belief");
  beliefs_[static_cast<std::size_t>(p)] = normalized(std::move(b));
}

void GlcState::refresh_all() {
  for (std::size_t p = 0; p < collection_.size(); ++p) refresh_belief(static_cast<int>(p));
}

const Table& GlcState::message(int q, int p) const {
  const int t = prg(p).top_for_source(q);
  if (t < 0) throw Error("no message from region " + std::to_string(q) + " to region " + std::to_string(p));
  return prg(p).nodes[static_cast<std::size_t>(t)].belief;
}

void GlcState::set_message(int q, int p, Table m) {
  const int t = prg(p).top_for_source(q);
  if (t < 0) throw Error("no message from region " + std::to_string(q) + " to region " + std::to_string(p));
  PrgNode& node = prg(p).nodes[static_cast<std::size_t>(t)];
  if (m.scope() != node.vars) throw Error("message scope mismatch");
  node.belief = normalized(std::move(m));
  refresh_belief(p);
}

const Table& GlcState::without_shared(int a, int b) const {
  const auto key = std::make_pair(a, b);
  auto it = without_shared_.find(key);
  if (it != without_shared_.end()) return it->second;
  const CavityRegion& ra = collection_.regions[static_cast<std::size_t>(a)];
  const CavityRegion& rb = collection_.regions[static_cast<std::size_t>(b)];
  const FactorSet kept = factor_set_difference(ra.factors, factor_set_intersection(ra.factors, rb.factors));
  Table t = Table::constant(ra.plus, graph_->cards_of(ra.plus), 1.0) * cavities_[static_cast<std::size_t>(a)].table;
  t = rescaled(t * factor_product(*graph_, kept));
  return without_shared_.emplace(key, std::move(t)).first->second;
}

Table GlcState::divided_marginal(int side, int p, int q) const {
  const int other = side == p ? q : p;
  Table t = without_shared(side, other) * weights_[static_cast<std::size_t>(side)];
  t = marginalize(t, collection_.intersection(p, q));
  if (!(t.sum() > 0.0)) throw Error("degenerate belief");
  return normalized(std::move(t));
}

namespace {

// num / den on a shared scope. Where the own side has no mass the message
// entry does not affect the belief, so it is left as is (ratio 1).
Table consistency_ratio(const Table& num, const Table& den) {
  Eigen::ArrayXd v = (den.values() > 0.0).select(num.values() / den.values(), 1.0);
  return Table(num.scope(), num.cards(), std::move(v));
}

Table damped(const Table& fresh, const Table& old, double damping) {
  if (damping <= 0.0) return fresh;
  Table mix = fresh;
  mix.values() = (1.0 - damping) * fresh.values() + damping * old.values();
  return normalized(std::move(mix));
}

}  // namespace

Table message_update(GlcState& s, int q, int p, double damping) {
  if (!s.collection().is_partition) throw Error("message updates require a partitioning collection");
  const Table& old = s.message(q, p);
  const Table ratio = consistency_ratio(s.divided_marginal(q, p, q), s.divided_marginal(p, p, q));
  Table fresh = damped(normalized(old * ratio), old, damping);
  s.set_message(q, p, fresh);
  return fresh;
}

Table top_update(GlcState& s, int p, int q, double damping) {
  PerimeterRegionGraph& prg = s.prg(p);
  const int t = prg.top_for_source(q);
  if (t < 0) throw Error("region " + std::to_string(q) + " does not feed a top node of region " + std::to_string(p));
  const PrgNode& node = prg.nodes[static_cast<std::size_t>(t)];
  if (node.effective.scope() != node.vars) throw Error("top update needs a completed upward pass");
  const Table ratio = consistency_ratio(s.divided_marginal(q, p, q), s.divided_marginal(p, p, q));
  Table fresh = damped(normalized(ratio * power(node.effective, node.counting_number)), node.belief, damping);
  prg.nodes[static_cast<std::size_t>(t)].belief = fresh;
  s.refresh_belief(p);
  return fresh;
}

SingleMarginals single_marginals(const GlcState& s) {
  const FactorGraph& g = s.graph();
  const auto& regions = s.collection().regions;
  SingleMarginals out;
  for (std::size_t v = 0; v < g.num_variables(); ++v) {
    const VarSet target{static_cast<VariableId>(v)};
    std::optional<Table> first;
    for (std::size_t p = 0; p < regions.size(); ++p) {
      if (!contains(regions[p].members, static_cast<VariableId>(v))) continue;
      Table m = normalized(marginalize(s.belief(static_cast<int>(p)), target));
      if (!first) {
        first = std::move(m);
      } else {
        out.max_discrepancy = std::max(out.max_discrepancy, max_abs_diff(*first, m));
      }
    }
    if (!first) throw Error("coverage violated");
    out.marginals.push_back(std::move(*first));
  }
  return out;
}

double consistency_residual(const GlcState& s, bool tops_only) {
  double worst = 0.0;
  for (std::size_t p = 0; p < s.collection().size(); ++p) {
    const int pi = static_cast<int>(p);
    for (int q : s.collection().nb[p]) {
      if (tops_only && s.prg(pi).top_for_source(q) < 0) continue;
      worst = std::max(worst, max_abs_diff(s.divided_marginal(pi, pi, q), s.divided_marginal(q, pi, q)));
    }
  }
  return worst;
}

GlcResult run_glc(GlcState& s, const GlcOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = s.collection().size();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(opts.seed);

  GlcResult result;
  result.partition_mode = s.partition_mode();
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    std::vector<Table> before;
    before.reserve(m);
    for (std::size_t p = 0; p < m; ++p) before.push_back(s.belief(static_cast<int>(p)));
    if (opts.schedule == GlcSchedule::random_permutation) rng.shuffle(order);

    for (int p : order) {
      PerimeterRegionGraph& prg = s.prg(p);
      if (s.partition_mode()) {
        for (int t : std::vector<int>(prg.tops)) message_update(s, prg.nodes[static_cast<std::size_t>(t)].source, p, opts.damping);
      } else {
        downward_pass(prg);
        upward_pass(prg);
        s.refresh_belief(p);
        for (int t : std::vector<int>(prg.tops)) top_update(s, p, prg.nodes[static_cast<std::size_t>(t)].source, opts.damping);
      }
    }

    double change = 0.0;
    for (std::size_t p = 0; p < m; ++p) change = std::max(change, max_abs_diff(before[p], s.belief(static_cast<int>(p))));
    ++s.iteration;
    s.last_change = change;
    s.change_trace.push_back(change);
    if (opts.on_sweep) opts.on_sweep(s);
    if (change < opts.tolerance) {
      result.converged = true;
      break;
    }
  }

  const SingleMarginals sm = single_marginals(s);
  result.marginals = sm.marginals;
  result.max_discrepancy = sm.max_discrepancy;
  result.iterations = s.iteration;
  result.change_trace = s.change_trace;
  result.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

GlcResult run_glc(const FactorGraph& g, RegionCollection collection, std::vector<CavityTable> cavities,
                  const GlcOptions& opts) {
  GlcState s(g, std::move(collection), std::move(cavities), opts);
  return run_glc(s, opts);
}

}  // namespace glc
