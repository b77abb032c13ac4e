#include "glc/cvm_gbp.hpp"

#include <algorithm>
#include <cmath>

#include "glc/error.hpp"
#include "glc/glc.hpp"

namespace glc {

namespace {

[[noreturn]] void precondition_failure() { throw Error("block construction preconditions not met"); }

const CavityRegion& region(const CvmConstruction& c, int p) { return c.partition.regions[static_cast<std::size_t>(p)]; }

Table ones(const FactorGraph& g, const VarSet& vars) { return Table::constant(vars, g.cards_of(vars), 1.0); }

}  // namespace

CvmConstruction build_cvm(const FactorGraph& g, const RegionCollection& partition) {
  if (!partition.is_partition) precondition_failure();
  for (const Table& f : g.factors())
    if (f.scope().size() > 2) precondition_failure();

  CvmConstruction c;
  c.graph = &g;
  c.partition = partition;
  const std::size_t m = partition.size();
  for (std::size_t p = 0; p < m; ++p) {
    CvmRegion r;
    r.vars = partition.regions[p].members;
    for (FactorId f : partition.regions[p].factors)
      if (is_subset(g.scope(f), r.vars)) r.factors.push_back(f);
    c.internal.push_back(std::move(r));
  }
  for (std::size_t p = 0; p < m; ++p) {
    for (int q : partition.nb[p]) {
      const int pi = static_cast<int>(p);
      if (pi < q) {
        const CavityRegion& rp = partition.regions[p];
        const CavityRegion& rq = region(c, q);
        c.bridges[{pi, q}] = {set_intersection(rp.plus, rq.plus), factor_set_intersection(rp.factors, rq.factors), 1.0};
      }
      // Sub region (q, p) sits inside r_q: ⊖r_{p,q}.
      c.subs[{q, pi}] = {partition.intersection(pi, q), {}, -1.0};
    }
  }

  const auto [vars, factors] = cvm_counts(c);
  for (double n : vars)
    if (n != 1.0) precondition_failure();
  for (double n : factors)
    if (n != 1.0) precondition_failure();
  return c;
}

std::pair<std::vector<double>, std::vector<double>> cvm_counts(const CvmConstruction& c) {
  std::vector<double> vars(c.graph->num_variables(), 0.0);
  std::vector<double> factors(c.graph->num_factors(), 0.0);
  auto add = [&](const CvmRegion& r) {
    for (VariableId v : r.vars) vars[static_cast<std::size_t>(v)] += r.counting_number;
    for (FactorId f : r.factors) factors[static_cast<std::size_t>(f)] += r.counting_number;
  };
  for (const auto& r : c.internal) add(r);
  for (const auto& [key, r] : c.bridges) add(r);
  for (const auto& [key, r] : c.subs) add(r);
  return {vars, factors};
}

GbpMessages gbp_uniform_messages(const CvmConstruction& c) {
  const FactorGraph& g = *c.graph;
  GbpMessages m;
  for (std::size_t p = 0; p < c.partition.size(); ++p) {
    const int pi = static_cast<int>(p);
    for (int q : c.partition.nb[p]) {
      const VarSet& into_q = c.partition.intersection(pi, q);  // ⊖r_{p,q} ⊆ r_q
      const VarSet& into_p = c.partition.intersection(q, pi);  // ⊖r_{q,p} ⊆ r_p
      m.is[{q, pi}] = Table::uniform(into_q, g.cards_of(into_q));
      m.bs[{q, pi}] = Table::uniform(into_p, g.cards_of(into_p));
    }
  }
  return m;
}

Table gbp_is_update(const CvmConstruction& c, const GbpMessages& m, int q, int p) {
  const FactorGraph& g = *c.graph;
  const CvmRegion& in = c.internal[static_cast<std::size_t>(q)];
  Table t = ones(g, in.vars) * factor_product(g, in.factors);
  for (int other : c.partition.nb[static_cast<std::size_t>(q)]) {
    if (other != p) t = rescaled(t * m.bs.at({other, q}));
  }
  return normalized(marginalize(t, c.partition.intersection(p, q)));
}

Table gbp_bs_update(const CvmConstruction& c, const GbpMessages& m, int q, int p) {
  const FactorGraph& g = *c.graph;
  const CvmRegion& br = c.bridges.at({std::min(p, q), std::max(p, q)});
  Table t = ones(g, br.vars) * factor_product(g, br.factors) * m.is.at({q, p});
  return normalized(marginalize(t, c.partition.intersection(q, p)));
}

GbpMessages gbp_fixed_point(const CvmConstruction& c, const GbpOptions& opts) {
  GbpMessages m = gbp_uniform_messages(c);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    double change = 0.0;
    for (auto& [key, msg] : m.is) {
      Table fresh = gbp_is_update(c, m, key.first, key.second);
      change = std::max(change, max_abs_diff(fresh, msg));
      msg = std::move(fresh);
    }
    for (auto& [key, msg] : m.bs) {
      Table fresh = gbp_bs_update(c, m, key.first, key.second);
      change = std::max(change, max_abs_diff(fresh, msg));
      msg = std::move(fresh);
    }
    m.iterations = it + 1;
    m.last_change = change;
    if (change < opts.tolerance) {
      m.converged = true;
      break;
    }
  }
  return m;
}

double gbp_residual(const CvmConstruction& c, const GbpMessages& m) {
  double worst = 0.0;
  for (const auto& [key, msg] : m.is)
    worst = std::max(worst, max_abs_diff(gbp_is_update(c, m, key.first, key.second), msg));
  for (const auto& [key, msg] : m.bs)
    worst = std::max(worst, max_abs_diff(gbp_bs_update(c, m, key.first, key.second), msg));
  return worst;
}

std::vector<Table> gbp_single_marginals(const CvmConstruction& c, const GbpMessages& m) {
  const FactorGraph& g = *c.graph;
  std::vector<Table> out(g.num_variables());
  for (std::size_t q = 0; q < c.internal.size(); ++q) {
    const CvmRegion& in = c.internal[q];
    Table t = ones(g, in.vars) * factor_product(g, in.factors);
    for (int other : c.partition.nb[q]) t = rescaled(t * m.bs.at({other, static_cast<int>(q)}));
    for (VariableId v : in.vars) out[static_cast<std::size_t>(v)] = normalized(marginalize(t, {v}));
  }
  return out;
}

double verify_gbp_mapping(const CvmConstruction& c, const GbpMessages& m) {
  const FactorGraph& g = *c.graph;
  std::vector<CavityTable> cavities;
  for (const CavityRegion& r : c.partition.regions) cavities.push_back(cavity_uniform(g, r));
  GlcOptions opts;
  opts.mode = GlcMode::partition;
  opts.allow_zero_factors = true;
  GlcState s(g, c.partition, std::move(cavities), opts);
  for (const auto& [key, msg] : m.is) s.set_message(key.first, key.second, msg);
  return consistency_residual(s);
}

GbpMessages gbp_from_lbp(const CvmConstruction& c, const LbpResult& lbp) {
  const FactorGraph& g = *c.graph;
  GbpMessages m = gbp_uniform_messages(c);
  for (auto& [key, msg] : m.is) {
    const CavityRegion& rq = region(c, key.first);
    const CavityRegion& rp = region(c, key.second);
    if (rq.members.size() != 1 || rp.members.size() != 1) throw Error("LBP mapping needs a single-variable partition");
    const VariableId vq = rq.members.front();
    const VariableId vp = rp.members.front();
    const VarSet edge = make_varset({vq, vp});
    FactorId joining = -1;
    for (FactorId f : g.neighbors(vq)) {
      if (g.scope(f) != edge) continue;
      if (joining >= 0) throw Error("two factors share the domain of an edge");
      joining = f;
    }
    if (joining < 0) throw Error("no factor joins the two variables");
    const VarSet& scope = g.scope(joining);
    const auto pos = static_cast<std::size_t>(std::find(scope.begin(), scope.end(), vq) - scope.begin());
    const Eigen::ArrayXd& n = lbp.var_to_factor[static_cast<std::size_t>(joining)][pos];
    msg = normalized(Table({vq}, {g.cardinality(vq)}, n));
  }
  for (auto& [key, msg] : m.bs) msg = gbp_bs_update(c, m, key.first, key.second);
  m.converged = lbp.converged;
  m.iterations = lbp.iterations;
  return m;
}

}  // namespace glc
