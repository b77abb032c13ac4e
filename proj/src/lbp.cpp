#include "glc/lbp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "glc/error.hpp"
#include "glc/random.hpp"

namespace glc {

namespace {

struct Edge {
  FactorId factor;
  std::size_t position;
};

class LbpRunner {
 public:
  LbpRunner(const FactorGraph& g, const LbpOptions& opts) : g_(g), opts_(opts), edges_(g.num_variables()) {
    if (opts.damping < 0.0 || opts.damping >= 1.0) throw Error("damping must lie in [0, 1)");
    const std::size_t nf = g.num_factors();
    f2v_.resize(nf);
    v2f_.resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      const Table& t = g.factor(static_cast<FactorId>(f));
      for (std::size_t k = 0; k < t.scope().size(); ++k) {
        const auto c = static_cast<Eigen::Index>(t.cards()[k]);
        f2v_[f].push_back(Eigen::ArrayXd::Constant(c, 1.0 / static_cast<double>(c)));
        v2f_[f].push_back(Eigen::ArrayXd::Constant(c, 1.0 / static_cast<double>(c)));
        edges_[static_cast<std::size_t>(t.scope()[k])].push_back({static_cast<FactorId>(f), k});
      }
    }
  }

  LbpResult run() {
    LbpResult result;
    std::vector<FactorId> order(g_.num_factors());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(opts_.seed);
    for (std::size_t it = 0; it < opts_.max_iters; ++it) {
      if (opts_.schedule == LbpSchedule::random_permutation) rng.shuffle(order);
      double change = 0.0;
      for (FactorId f : order) change = std::max(change, update_factor(f));
      result.iterations = it + 1;
      result.max_change = change;
      if (change < opts_.tolerance) {
        result.converged = true;
        break;
      }
    }
    if (g_.num_factors() == 0) result.converged = true;
    for (std::size_t f = 0; f < g_.num_factors(); ++f)
      for (std::size_t k = 0; k < v2f_[f].size(); ++k) v2f_[f][k] = var_to_factor(static_cast<FactorId>(f), k);

    result.zero_mass = zero_mass_;
    compute_beliefs(result);
    result.factor_to_var = std::move(f2v_);
    result.var_to_factor = std::move(v2f_);
    result.bethe_log_z = bethe_log_z(g_, result);
    return result;
  }

 private:
  Eigen::ArrayXd var_to_factor(FactorId f, std::size_t position) {
    const VariableId v = g_.scope(f)[position];
    Eigen::ArrayXd msg = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(g_.cardinality(v)));
    for (const Edge& e : edges_[static_cast<std::size_t>(v)]) {
      if (e.factor != f) msg *= f2v_[static_cast<std::size_t>(e.factor)][e.position];
    }
    return normalize_or_flag(std::move(msg));
  }

  Eigen::ArrayXd normalize_or_flag(Eigen::ArrayXd msg) {
    const double s = msg.sum();
    if (s > 0.0 && std::isfinite(s)) return msg / s;
    zero_mass_ = true;
    return Eigen::ArrayXd::Constant(msg.size(), 1.0 / static_cast<double>(msg.size()));
  }

  // Recomputes the incoming variable messages of factor f and its outgoing
  // messages; returns the largest entry change of either.
  double update_factor(FactorId f) {
    const auto fi = static_cast<std::size_t>(f);
    const Table& t = g_.factor(f);
    const std::size_t k_count = t.scope().size();
    double change = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      Eigen::ArrayXd n = var_to_factor(f, k);
      change = std::max(change, (n - v2f_[fi][k]).abs().maxCoeff());
      v2f_[fi][k] = std::move(n);
    }

    std::vector<Eigen::ArrayXd> out(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
      out[k] = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(t.cards()[k]));
    std::vector<std::size_t> digit(k_count, 0);
    std::vector<double> prefix(k_count + 1), suffix(k_count + 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double psi = t[i];
      if (psi != 0.0) {
        prefix[0] = psi;
        for (std::size_t k = 0; k < k_count; ++k)
          prefix[k + 1] = prefix[k] * v2f_[fi][k][static_cast<Eigen::Index>(digit[k])];
        suffix[k_count] = 1.0;
        for (std::size_t k = k_count; k-- > 0;)
          suffix[k] = suffix[k + 1] * v2f_[fi][k][static_cast<Eigen::Index>(digit[k])];
        for (std::size_t k = 0; k < k_count; ++k)
          out[k][static_cast<Eigen::Index>(digit[k])] += prefix[k] * suffix[k + 1];
      }
      for (std::size_t k = k_count; k-- > 0;) {
        if (++digit[k] < t.cards()[k]) break;
        digit[k] = 0;
      }
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      Eigen::ArrayXd m = normalize_or_flag(std::move(out[k]));
      if (opts_.damping > 0.0) m = (1.0 - opts_.damping) * m + opts_.damping * f2v_[fi][k];
      change = std::max(change, (m - f2v_[fi][k]).abs().maxCoeff());
      f2v_[fi][k] = std::move(m);
    }
    return change;
  }

  void compute_beliefs(LbpResult& result) {
    for (std::size_t v = 0; v < g_.num_variables(); ++v) {
      const std::size_t c = g_.cardinality(static_cast<VariableId>(v));
      Eigen::ArrayXd b = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(c));
      for (const Edge& e : edges_[v]) b *= f2v_[static_cast<std::size_t>(e.factor)][e.position];
      b = normalize_or_flag(std::move(b));
      result.singles.emplace_back(VarSet{static_cast<VariableId>(v)}, std::vector<std::size_t>{c}, std::move(b));
    }
    for (std::size_t f = 0; f < g_.num_factors(); ++f) {
      const Table& t = g_.factor(static_cast<FactorId>(f));
      Table b = t;
      for (std::size_t k = 0; k < t.scope().size(); ++k)
        b = b * Table({t.scope()[k]}, {t.cards()[k]}, v2f_[f][k]);
      if (b.sum() > 0.0) {
        b = normalized(std::move(b));
      } else {
        zero_mass_ = true;
        result.zero_mass = true;
      }
      result.factor_beliefs.push_back(std::move(b));
    }
  }

  const FactorGraph& g_;
  const LbpOptions& opts_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<Eigen::ArrayXd>> f2v_;
  std::vector<std::vector<Eigen::ArrayXd>> v2f_;
  bool zero_mass_ = false;
};

double entropy(const Eigen::ArrayXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  return h;
}

}  // namespace

LbpResult run_lbp(const FactorGraph& g, const LbpOptions& opts) {
  if (g.num_variables() == 0 && g.num_factors() == 0) throw Error("empty factor graph");
  return LbpRunner(g, opts).run();
}

double bethe_log_z(const FactorGraph& g, const LbpResult& result) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (result.zero_mass || g.log_constant() == kNegInf) return kNegInf;
  if (result.singles.size() != g.num_variables() || result.factor_beliefs.size() != g.num_factors())
    throw Error("LBP result does not belong to this graph");
  double value = g.log_constant();
  for (std::size_t f = 0; f < g.num_factors(); ++f) {
    const Table& psi = g.factor(static_cast<FactorId>(f));
    const Table& b = result.factor_beliefs[f];
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] > 0.0) value += b[i] * (std::log(psi[i]) - std::log(b[i]));
    }
  }
  for (std::size_t v = 0; v < g.num_variables(); ++v) {
    const double degree = static_cast<double>(g.neighbors(static_cast<VariableId>(v)).size());
    value += (1.0 - degree) * entropy(result.singles[v].values());
  }
  return value;
}

}  // namespace glc
