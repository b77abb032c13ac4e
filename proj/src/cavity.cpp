#include "glc/cavity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <mutex>
#include <thread>

#include "glc/error.hpp"

namespace glc {

bool is_connected_region(const FactorGraph& g, const VarSet& members) {
  if (members.empty()) return false;
  std::vector<VariableId> frontier{members.front()};
  VarSet seen{members.front()};
  while (!frontier.empty()) {
    const VariableId v = frontier.back();
    frontier.pop_back();
    for (FactorId f : g.neighbors(v)) {
      for (VariableId w : g.scope(f)) {
        if (contains(members, w) && !contains(seen, w)) {
          seen.insert(std::lower_bound(seen.begin(), seen.end(), w), w);
          frontier.push_back(w);
        }
      }
    }
  }
  return seen.size() == members.size();
}

CavityRegion make_region(const FactorGraph& g, VarSet members, int id) {
  members = make_varset(std::move(members));
  if (members.empty()) throw Error("cavity region needs at least one variable");
  for (VariableId v : members) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.num_variables())
      throw Error("cavity region references unknown variable");
  }
  if (!is_connected_region(g, members)) throw Error("not a cavity region");
  CavityRegion r;
  r.id = id;
  r.factors = factors_touching(g, members);
  r.plus = set_union(members, scope_union(g, r.factors));
  r.perimeter = set_difference(r.plus, members);
  r.members = std::move(members);
  return r;
}

std::string to_string(CavityProvenance p) {
  switch (p) {
    case CavityProvenance::uniform:
      return "uniform";
    case CavityProvenance::clamped_lbp:
      return "clamped-lbp";
    case CavityProvenance::clamped_exact:
      return "clamped-exact";
  }
  return "uniform";
}

CavityProvenance provenance_from_string(const std::string& s) {
  if (s == "uniform") return CavityProvenance::uniform;
  if (s == "clamped-lbp") return CavityProvenance::clamped_lbp;
  if (s == "clamped-exact") return CavityProvenance::clamped_exact;
  throw Error("unknown cavity provenance " + s);
}

CavityTable cavity_uniform(const FactorGraph& g, const CavityRegion& region) {
  return {region.id, Table::uniform(region.perimeter, g.cards_of(region.perimeter)), CavityProvenance::uniform, 0};
}

namespace {

double clamped_log_z(const FactorGraph& reduced, const Assignment& a, const CavityOptions& opts, bool& converged) {
  const FactorGraph clamped = clamp(reduced, a);
  converged = true;
  if (clamped.log_constant() == -std::numeric_limits<double>::infinity()) return clamped.log_constant();
  if (clamped.num_factors() == 0) return clamped.log_constant() + clamped.log_state_count();
  if (opts.method == ClampMethod::exact) return variable_elimination(clamped, {}, opts.elimination).log_z;
  const LbpResult r = run_lbp(clamped, opts.lbp);
  converged = r.converged;
  return r.bethe_log_z;
}

}  // namespace

CavityTable cavity_estimate_clamp(const FactorGraph& g, const CavityRegion& region, const CavityOptions& opts) {
  const auto cards = g.cards_of(region.perimeter);
  std::size_t count = 1;
  for (std::size_t c : cards) {
    if (count > opts.max_assignments / c) throw Error("perimeter too large");
    count *= c;
  }
  const FactorGraph reduced = remove_factors(g, region.factors);
  Table shape = Table::constant(region.perimeter, cards, 0.0);

  std::vector<double> log_z(count, 0.0);
  std::vector<char> converged(count, 1);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) {
        const auto digits = shape.digits(i);
        Assignment a;
        for (std::size_t k = 0; k < digits.size(); ++k) a[region.perimeter[k]] = digits[k];
        bool ok = true;
        log_z[i] = clamped_log_z(reduced, a, opts, ok);
        converged[i] = ok ? 1 : 0;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const double top = *std::max_element(log_z.begin(), log_z.end());
  if (!std::isfinite(top)) throw Error("cavity distribution has no support");
  Eigen::ArrayXd values(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) values[static_cast<Eigen::Index>(i)] = std::exp(log_z[i] - top);

  CavityTable out;
  out.region = region.id;
  out.table = normalized(Table(region.perimeter, cards, std::move(values)));
  out.provenance = opts.method == ClampMethod::lbp ? CavityProvenance::clamped_lbp : CavityProvenance::clamped_exact;
  out.nonconverged = static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 0));
  return out;
}

}  // namespace glc
