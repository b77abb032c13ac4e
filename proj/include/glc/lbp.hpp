#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "glc/factor_graph.hpp"

namespace glc {

enum class LbpSchedule { sequential, random_permutation };

/// Defaults stop after 1e4 sweeps or once no message entry moves by more
/// than 1e-9 during a sweep, with no damping.
struct LbpOptions {
  std::size_t max_iters = 10000;
  double tolerance = 1e-9;
  double damping = 0.0;  // in [0, 1)
  LbpSchedule schedule = LbpSchedule::sequential;
  std::uint64_t seed = 0;  // only used by random_permutation
};

struct LbpResult {
  std::vector<Table> singles;
  std::vector<Table> factor_beliefs;
  bool converged = false;
  std::size_t iterations = 0;
  double max_change = 0.0;
  double bethe_log_z = 0.0;
  /// Some message had zero mass (the model has no support under the
  /// messages); the Bethe estimate is then -inf.
  bool zero_mass = false;

  /// Normalized messages indexed [factor][position in the factor's scope].
  std::vector<std::vector<Eigen::ArrayXd>> factor_to_var;
  std::vector<std::vector<Eigen::ArrayXd>> var_to_factor;
};

/// Sum-product loopy belief propagation with uniform initial messages.
/// Non-convergence is reported through the flag, never thrown.
LbpResult run_lbp(const FactorGraph& g, const LbpOptions& opts = {});

/// Bethe approximation to log Z from the beliefs of `result`:
/// sum_I [E_bI log psi_I + H(b_I)] + sum_i (1 - |N(i)|) H(b_i).
/// Exact on trees. 0 log 0 is taken as 0.
double bethe_log_z(const FactorGraph& g, const LbpResult& result);

}  // namespace glc
