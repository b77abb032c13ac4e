#include "glc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "glc/error.hpp"
#include "glc/exact.hpp"
#include "glc/cvm_gbp.hpp"
#include "glc/generators.hpp"
#include "glc/serialize.hpp"
#include "glc/uai.hpp"

namespace glc {

namespace {

void check_domains(const std::vector<Table>& estimate, const std::vector<Table>& exact) {
  if (estimate.size() != exact.size()) throw Error("marginal count mismatch");
  for (std::size_t i = 0; i < exact.size(); ++i)
    if (estimate[i].size() != exact[i].size()) throw Error("marginal domain mismatch at variable " + std::to_string(i));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double avg_marginal_error(const std::vector<Table>& estimate, const std::vector<Table>& exact) {
  check_domains(estimate, exact);
  if (exact.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) total += (estimate[i].values() - exact[i].values()).abs().sum();
  return total / static_cast<double>(exact.size());
}

double max_marginal_error(const std::vector<Table>& estimate, const std::vector<Table>& exact) {
  check_domains(estimate, exact);
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i)
    worst = std::max(worst, (estimate[i].values() - exact[i].values()).abs().maxCoeff());
  return worst;
}

std::string to_string(RegionKind r) {
  switch (r) {
    case RegionKind::single:
      return "single";
    case RegionKind::factor:
      return "factor";
    case RegionKind::loop3:
      return "loop3";
    case RegionKind::loop4:
      return "loop4";
  }
  return "single";
}

std::string to_string(CavityKind c) {
  switch (c) {
    case CavityKind::uniform:
      return "uniform";
    case CavityKind::full:
      return "full";
    case CavityKind::exact:
      return "exact";
  }
  return "full";
}

RegionKind region_kind_from_string(const std::string& s) {
  if (s == "single") return RegionKind::single;
  if (s == "factor") return RegionKind::factor;
  if (s == "loop3") return RegionKind::loop3;
  if (s == "loop4") return RegionKind::loop4;
  throw Error("unknown region kind " + s);
}

CavityKind cavity_kind_from_string(const std::string& s) {
  if (s == "uniform") return CavityKind::uniform;
  if (s == "full") return CavityKind::full;
  if (s == "exact") return CavityKind::exact;
  throw Error("unknown cavity kind " + s);
}

RegionCollection build_regions(const FactorGraph& g, RegionKind kind) {
  switch (kind) {
    case RegionKind::single:
      return partition_single_variables(g);
    case RegionKind::factor:
      return clusters_factor_domains(g);
    case RegionKind::loop3:
      return clusters_loops(g, 3);
    case RegionKind::loop4:
      return clusters_loops(g, 4);
  }
  return partition_single_variables(g);
}

std::vector<CavityTable> build_cavities(const FactorGraph& g, const RegionCollection& c, CavityKind kind,
                                        const CavityOptions& opts) {
  std::vector<CavityTable> out;
  CavityOptions o = opts;
  o.method = kind == CavityKind::exact ? ClampMethod::exact : ClampMethod::lbp;
  for (const CavityRegion& r : c.regions)
    out.push_back(kind == CavityKind::uniform ? cavity_uniform(g, r) : cavity_estimate_clamp(g, r, o));
  return out;
}

std::string MethodSpec::id() const {
  switch (kind) {
    case Kind::lbp:
      return "lbp";
    case Kind::glc:
      return "glc-" + to_string(regions) + "-" + to_string(cavity);
    case Kind::gbp:
      return "gbp-" + to_string(regions);
  }
  return "lbp";
}

MethodSpec MethodSpec::parse(const std::string& id) {
  MethodSpec m;
  if (id == "lbp") return m;
  const auto first = id.find('-');
  const std::string head = id.substr(0, first);
  if (first == std::string::npos) throw Error("unknown method " + id);
  if (head == "gbp") {
    m.kind = Kind::gbp;
    m.regions = region_kind_from_string(id.substr(first + 1));
    return m;
  }
  const auto second = id.find('-', first + 1);
  if (head != "glc" || second == std::string::npos) throw Error("unknown method " + id);
  m.kind = Kind::glc;
  m.regions = region_kind_from_string(id.substr(first + 1, second - first - 1));
  m.cavity = cavity_kind_from_string(id.substr(second + 1));
  return m;
}

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::ising_grid:
      return "ising-grid";
    case ModelKind::random_grid:
      return "random-grid";
    case ModelKind::regular_ising:
      return "regular-ising";
    case ModelKind::ising_cycle:
      return "ising-cycle";
    case ModelKind::random_tree:
      return "random-tree";
    case ModelKind::uai:
      return "uai";
  }
  return "ising-grid";
}

ModelKind model_kind_from_string(const std::string& s) {
  for (ModelKind m : {ModelKind::ising_grid, ModelKind::random_grid, ModelKind::regular_ising, ModelKind::ising_cycle,
                      ModelKind::random_tree, ModelKind::uai})
    if (to_string(m) == s) return m;
  throw Error("unknown model " + s);
}

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  s.model = model_kind_from_string(j.value("model", std::string("ising-grid")));
  s.size = j.value("size", s.size);
  s.periodic = j.value("periodic", s.periodic);
  s.beta = j.value("beta", s.beta);
  if (j.contains("field_std")) s.field_std = j.at("field_std").get<double>();
  s.degree = j.value("degree", s.degree);
  s.uai_path = j.value("uai", std::string());
  for (const auto& m : j.value("methods", std::vector<std::string>{"lbp"})) s.methods.push_back(MethodSpec::parse(m));
  s.seed = j.value("seed", s.seed);
  s.replications = j.value("replications", s.replications);
  s.lbp.max_iters = s.glc.max_iters = j.value("max_iters", s.glc.max_iters);
  s.lbp.tolerance = s.glc.tolerance = j.value("tolerance", s.glc.tolerance);
  s.glc.damping = j.value("damping", 0.0);
  s.glc.allow_zero_factors = j.value("allow_zero_factors", false);
  s.cavity.threads = j.value("threads", 0u);
  s.cavity.lbp = s.lbp;
  return s;
}

nlohmann::json experiment_to_json(const ExperimentSpec& s) {
  std::vector<std::string> methods;
  for (const auto& m : s.methods) methods.push_back(m.id());
  nlohmann::json j = {{"model", to_string(s.model)},
                      {"size", s.size},
                      {"periodic", s.periodic},
                      {"beta", s.beta},
                      {"degree", s.degree},
                      {"methods", methods},
                      {"seed", s.seed},
                      {"replications", s.replications},
                      {"max_iters", s.glc.max_iters},
                      {"tolerance", s.glc.tolerance},
                      {"damping", s.glc.damping},
                      {"allow_zero_factors", s.glc.allow_zero_factors}};
  if (s.field_std) j["field_std"] = *s.field_std;
  if (!s.uai_path.empty()) j["uai"] = s.uai_path;
  return j;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t k) { return splitmix64(seed ^ splitmix64(k)); }

FactorGraph make_instance(const ExperimentSpec& spec, std::size_t k) {
  const std::uint64_t s = instance_seed(spec.seed, k);
  switch (spec.model) {
    case ModelKind::ising_grid:
      return gen_ising_grid(spec.size, spec.periodic, spec.beta, s, spec.field_std.value_or(1.0));
    case ModelKind::random_grid:
      return gen_random_table_grid(spec.size, spec.periodic, s);
    case ModelKind::regular_ising:
      return gen_regular_ising(spec.size, spec.degree, spec.beta, s, spec.field_std);
    case ModelKind::ising_cycle:
      return gen_ising_cycle(spec.size, spec.beta, s);
    case ModelKind::random_tree:
      return gen_random_tree(spec.size, 2, 3, s);
    case ModelKind::uai:
      return read_uai_file(spec.uai_path);
  }
  throw Error("unknown model");
}

RunReport run_method(const FactorGraph& g, const MethodSpec& m, const ExperimentSpec& spec) {
  RunReport r;
  r.method = m.id();
  r.n_vars = g.num_variables();
  r.beta = spec.beta;
  const auto start = std::chrono::steady_clock::now();
  switch (m.kind) {
    case MethodSpec::Kind::lbp: {
      LbpResult res = run_lbp(g, spec.lbp);
      r.marginals = std::move(res.singles);
      r.converged = res.converged;
      r.iterations = res.iterations;
      break;
    }
    case MethodSpec::Kind::glc: {
      RegionCollection c = build_regions(g, m.regions);
      CavityOptions copts = spec.cavity;
      copts.lbp = spec.lbp;
      auto cavities = build_cavities(g, c, m.cavity, copts);
      GlcResult res = run_glc(g, std::move(c), std::move(cavities), spec.glc);
      r.marginals = std::move(res.marginals);
      r.converged = res.converged;
      r.iterations = res.iterations;
      r.change_trace = std::move(res.change_trace);
      break;
    }
    case MethodSpec::Kind::gbp: {
      const CvmConstruction cvm = build_cvm(g, build_regions(g, m.regions));
      GbpMessages msgs = gbp_fixed_point(cvm, {spec.glc.max_iters, spec.glc.tolerance});
      r.marginals = gbp_single_marginals(cvm, msgs);
      r.converged = msgs.converged;
      r.iterations = msgs.iterations;
      break;
    }
  }
  r.wall_time_seconds = seconds_since(start);
  return r;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult out;
  out.spec = spec;
  std::map<std::string, std::vector<RunReport>> by_method;
  for (std::size_t k = 0; k < spec.replications; ++k) {
    const FactorGraph g = make_instance(spec, k);
    ExactResult exact;
    try {
      exact = exact_marginals(g);
    } catch (const Error& e) {
      throw Error(std::string("exact oracle infeasible (") + e.what() + "); use a smaller instance");
    }
    for (const MethodSpec& m : spec.methods) {
      RunReport r = run_method(g, m, spec);
      r.instance = k;
      r.seed = instance_seed(spec.seed, k);
      r.avg_error = avg_marginal_error(r.marginals, exact.singles);
      r.max_error = max_marginal_error(r.marginals, exact.singles);
      by_method[r.method].push_back(std::move(r));
    }
    out.exact.push_back(std::move(exact.singles));
  }
  for (const MethodSpec& m : spec.methods) {
    auto it = by_method.find(m.id());
    if (it == by_method.end()) continue;
    for (auto& r : it->second) out.reports.push_back(std::move(r));
    by_method.erase(it);
  }
  return out;
}

std::vector<std::size_t> all_converged_instances(const ExperimentResult& r) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < r.spec.replications; ++k) {
    const bool all = std::all_of(r.reports.begin(), r.reports.end(),
                                 [&](const RunReport& rep) { return rep.instance != k || rep.converged; });
    if (all) keep.push_back(k);
  }
  return keep;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

void write_csv(std::ostream& out, const ExperimentResult& r) {
  out << "method,instance,seed,n_vars,beta,converged,iterations,avg_error,max_error,time_s\n";
  out << std::setprecision(10);
  for (const RunReport& rep : r.reports) {
    out << rep.method << ',' << rep.instance << ',' << rep.seed << ',' << rep.n_vars << ',' << rep.beta << ','
        << (rep.converged ? 1 : 0) << ',' << rep.iterations << ',' << rep.avg_error << ',' << rep.max_error << ','
        << rep.wall_time_seconds << '\n';
  }

  const auto keep = all_converged_instances(r);
  std::vector<std::string> methods;
  for (const RunReport& rep : r.reports)
    if (std::find(methods.begin(), methods.end(), rep.method) == methods.end()) methods.push_back(rep.method);
  for (const std::string& m : methods) {
    std::vector<double> iters, avg, mx, time;
    std::size_t n_vars = 0;
    for (const RunReport& rep : r.reports) {
      if (rep.method != m || std::find(keep.begin(), keep.end(), rep.instance) == keep.end()) continue;
      iters.push_back(static_cast<double>(rep.iterations));
      avg.push_back(rep.avg_error);
      mx.push_back(rep.max_error);
      time.push_back(rep.wall_time_seconds);
      n_vars = rep.n_vars;
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
    };
    out << m << ",mean,," << n_vars << ',' << r.spec.beta << ',' << keep.size() << ',' << mean(iters) << ','
        << mean(avg) << ',' << mean(mx) << ',' << mean(time) << '\n';
    out << m << ",median,," << n_vars << ',' << r.spec.beta << ',' << keep.size() << ',' << median(iters) << ','
        << median(avg) << ',' << median(mx) << ',' << median(time) << '\n';
  }
}

nlohmann::json experiment_result_to_json(const ExperimentResult& r) {
  nlohmann::json instances = nlohmann::json::array();
  for (std::size_t k = 0; k < r.exact.size(); ++k)
    instances.push_back({{"instance", k}, {"seed", instance_seed(r.spec.seed, k)}, {"exact", marginals_to_json(r.exact[k])}});
  nlohmann::json runs = nlohmann::json::array();
  for (const RunReport& rep : r.reports) {
    runs.push_back({{"method", rep.method},
                    {"instance", rep.instance},
                    {"seed", rep.seed},
                    {"n_vars", rep.n_vars},
                    {"beta", rep.beta},
                    {"converged", rep.converged},
                    {"iterations", rep.iterations},
                    {"avg_error", rep.avg_error},
                    {"max_error", rep.max_error},
                    {"wall_time_seconds", rep.wall_time_seconds},
                    {"change_trace", rep.change_trace},
                    {"marginals", marginals_to_json(rep.marginals)}});
  }
  return {{"spec", experiment_to_json(r.spec)}, {"instances", instances}, {"runs", runs}};
}

}  // namespace glc
