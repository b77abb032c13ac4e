#include "glc/checks.hpp"

#include "glc/bench.hpp"
#include "glc/error.hpp"
#include "glc/exact.hpp"
#include "glc/cvm_gbp.hpp"
#include "glc/generators.hpp"

namespace glc {

RegionCollection grid_blocks(const FactorGraph& g, std::size_t n, std::size_t block) {
  if (block == 0 || n % block != 0) throw Error("block size must divide the grid side");
  std::vector<VarSet> sets;
  for (std::size_t br = 0; br < n; br += block) {
    for (std::size_t bc = 0; bc < n; bc += block) {
      VarSet s;
      for (std::size_t r = br; r < br + block; ++r)
        for (std::size_t c = bc; c < bc + block; ++c) s.push_back(static_cast<VariableId>(r * n + c));
      sets.push_back(make_varset(std::move(s)));
    }
  }
  return make_collection(g, sets);
}

BlockMappingCheck check_block_mapping(const FactorGraph& g, const RegionCollection& partition, double tolerance) {
  const CvmConstruction cvm = build_cvm(g, partition);
  GbpOptions opts;
  opts.tolerance = tolerance;
  const GbpMessages m = gbp_fixed_point(cvm, opts);
  return {m.converged, m.iterations, gbp_residual(cvm, m), verify_gbp_mapping(cvm, m)};
}

LbpMappingCheck check_lbp_mapping(std::size_t n, double beta, std::uint64_t seed, std::size_t min_girth,
                                 double tolerance, std::size_t max_attempts) {
  LbpOptions lopts;
  lopts.tolerance = tolerance;
  for (std::size_t a = 0; a < max_attempts; ++a) {
    const std::uint64_t s = instance_seed(seed, a);
    const FactorGraph g = gen_regular_ising(n, 3, beta, s);
    const std::size_t gi = girth(n, interaction_edges(g));
    if (gi < min_girth) continue;
    const LbpResult lbp = run_lbp(g, lopts);
    if (!lbp.converged) continue;
    const CvmConstruction cvm = build_cvm(g, partition_single_variables(g));
    return {s, a + 1, gi, lbp.iterations, verify_gbp_mapping(cvm, gbp_from_lbp(cvm, lbp))};
  }
  throw Error("no graph passed the girth and convergence screen");
}

ExactnessCheck check_exactness(const FactorGraph& g, bool exact_cavity, double tolerance) {
  const RegionCollection c = partition_single_variables(g);
  auto cavities = build_cavities(g, c, exact_cavity ? CavityKind::exact : CavityKind::full);
  GlcOptions opts;
  opts.tolerance = tolerance;
  const GlcResult r = run_glc(g, c, std::move(cavities), opts);
  const ExactResult exact = exact_marginals(g);
  return {r.converged, avg_marginal_error(r.marginals, exact.singles), max_marginal_error(r.marginals, exact.singles)};
}

}  // namespace glc
