#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "glc/lbp.hpp"
#include "glc/regions.hpp"

namespace glc {

/// Region of the two-level CVM construction over a partition.
struct CvmRegion {
  VarSet vars;
  FactorSet factors;
  double counting_number = 1.0;
};

using RegionPair = std::pair<int, int>;

/// Internal, bridge and sub regions built over a partition of a pairwise
/// model. Internal region p holds r_p and the factors inside it; the bridge
/// of an unordered neighbour pair holds ⊕r_p ∩ ⊕r_q and N(r_p) ∩ N(r_q); the
/// sub region keyed (p, q) is the intersection of internal p with the bridge,
/// which equals ⊖r_{q,p}.
struct CvmConstruction {
  const FactorGraph* graph = nullptr;
  RegionCollection partition;
  std::vector<CvmRegion> internal;
  std::map<RegionPair, CvmRegion> bridges;  // key (min, max)
  std::map<RegionPair, CvmRegion> subs;     // key (p, q), vars ⊆ r_p
};

/// Throws Error("block construction preconditions not met") unless the collection is
/// a partition, every factor has at most two variables, and the regions
/// count every variable and factor exactly once.
CvmConstruction build_cvm(const FactorGraph& g, const RegionCollection& partition);

/// Net count Σ cn [v ∈ R] of every variable and Σ cn [I ∈ R] of every factor.
std::pair<std::vector<double>, std::vector<double>> cvm_counts(const CvmConstruction& c);

/// Messages keyed (q, p). is[(q,p)] is the internal-to-sub message over
/// ⊖r_{p,q} ⊆ r_q; bs[(q,p)] is the bridge-to-sub message over ⊖r_{q,p} ⊆ r_p.
struct GbpMessages {
  std::map<RegionPair, Table> is;
  std::map<RegionPair, Table> bs;
  bool converged = false;
  std::size_t iterations = 0;
  double last_change = 0.0;
};

struct GbpOptions {
  std::size_t max_iters = 10000;
  double tolerance = 1e-9;
};

GbpMessages gbp_uniform_messages(const CvmConstruction& c);

/// Right-hand sides of the two fixed-point equations for one ordered pair.
Table gbp_is_update(const CvmConstruction& c, const GbpMessages& m, int q, int p);
Table gbp_bs_update(const CvmConstruction& c, const GbpMessages& m, int q, int p);

/// Alternates full sweeps of the internal-to-sub and bridge-to-sub
/// equations until no entry moves by more than the tolerance.
GbpMessages gbp_fixed_point(const CvmConstruction& c, const GbpOptions& opts = {});

/// Largest gap between the stored messages and the right-hand sides.
double gbp_residual(const CvmConstruction& c, const GbpMessages& m);

/// Beliefs of the internal regions marginalized onto each variable.
std::vector<Table> gbp_single_marginals(const CvmConstruction& c, const GbpMessages& m);

/// Loads m_{q→p} := is[(q,p)] into a partition-mode GLC state with uniform
/// cavities and returns the largest pairwise consistency residual.
double verify_gbp_mapping(const CvmConstruction& c, const GbpMessages& m);

/// Internal-to-sub messages read off an LBP run on a single-variable
/// partition: is[(q,p)] is the variable-to-factor message from q into the
/// factor joining p and q.
GbpMessages gbp_from_lbp(const CvmConstruction& c, const LbpResult& lbp);

}  // namespace glc
