#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "glc/cavity.hpp"
#include "glc/regions.hpp"

namespace glc {

/// One node of a perimeter region graph: a subset of ⊖r_p with its
/// counting number and current belief.
struct PrgNode {
  VarSet vars;
  double counting_number = 1.0;
  Table belief;
  std::vector<int> parents;   // immediate parents only
  std::vector<int> children;  // immediate children only
  bool top = false;
  int source = -1;  // for tops: the lowest region q with ⊖r_{p,q} == vars

  // Filled by the passes.
  std::vector<Table> from_parents;  // μ_{parent→this}, aligned with parents
  Table effective;                  // b^eff
};

/// Region graph over the perimeter of region `owner`. Tops are the maximal
/// distinct sets among the nonempty ⊖r_{p,q}; the remaining nodes close the
/// tops under intersection. Nodes are stored tops first (ascending
/// lexicographic order), then by decreasing size, so every parent precedes
/// its children.
struct PerimeterRegionGraph {
  int owner = 0;
  std::vector<PrgNode> nodes;
  std::vector<int> tops;

  int top_for_source(int q) const;
};

PerimeterRegionGraph build_perimeter_region_graph(const FactorGraph& g, const RegionCollection& c, int p);

/// Sub-node beliefs := normalized geometric mean of the parents' marginals.
void downward_pass(PerimeterRegionGraph& prg);
/// b^eff(ρ') := b(ρ') Π_{children ρ} b^eff(ρ) / μ_{ρ'→ρ}, leaves first.
/// Requires the μ cached by downward_pass.
void upward_pass(PerimeterRegionGraph& prg);

enum class GlcSchedule { round_robin, random_permutation };
enum class GlcMode { automatic, partition, general };

class GlcState;

/// Defaults stop after 1e4 sweeps or when no region belief moves by more
/// than 1e-9 in a sweep, with no damping.
struct GlcOptions {
  std::size_t max_iters = 10000;
  double tolerance = 1e-9;
  GlcSchedule schedule = GlcSchedule::round_robin;
  GlcMode mode = GlcMode::automatic;
  double damping = 0.0;
  std::uint64_t seed = 0;
  /// Accept factors with zero entries in divided factor products. The
  /// division itself is never carried out (see GlcState), so this only
  /// disables the configuration check.
  bool allow_zero_factors = false;
  /// Called after every sweep.
  std::function<void(const GlcState&)> on_sweep;
};

/// Mutable message-passing state. Single writer; the factor graph must
/// outlive it.
class GlcState {
 public:
  GlcState(const FactorGraph& g, RegionCollection collection, std::vector<CavityTable> cavities,
           const GlcOptions& opts = {});

  const FactorGraph& graph() const { return *graph_; }
  const RegionCollection& collection() const { return collection_; }
  const std::vector<CavityTable>& cavities() const { return cavities_; }
  bool partition_mode() const { return partition_mode_; }

  const PerimeterRegionGraph& prg(int p) const { return prg_[static_cast<std::size_t>(p)]; }
  PerimeterRegionGraph& prg(int p) { return prg_[static_cast<std::size_t>(p)]; }

  /// Cached normalized P̂_{r_p} over ⊕r_p.
  const Table& belief(int p) const { return beliefs_[static_cast<std::size_t>(p)]; }
  /// Recomputes P̂_{r_p} and the cached node weight from the cavity, factors
  /// and node beliefs. Call after editing node beliefs directly.
  void refresh_belief(int p);
  void refresh_all();

  /// Message m_{q→p} (partition mode), i.e. the top belief fed by q.
  const Table& message(int q, int p) const;
  void set_message(int q, int p, Table m);

  /// Π_ρ b(x_ρ)^{cn(ρ)} over the union of the nodes.
  Table node_weight(int p) const;

  /// Normalized Σ_{x \ ⊖r_{p,q}} P̂_{r_a} / ψ_{N(r_p) ∩ N(r_q)} for a = p or q:
  /// the two sides of the pairwise consistency condition. Computed as the
  /// product that leaves out the shared factors, never by dividing. Uses
  /// the node weights as of the last refresh.
  Table divided_marginal(int side, int p, int q) const;

  std::size_t iteration = 0;
  double last_change = std::numeric_limits<double>::infinity();
  std::vector<double> change_trace;

 private:
  const Table& without_shared(int a, int b) const;

  const FactorGraph* graph_;
  RegionCollection collection_;
  std::vector<CavityTable> cavities_;
  std::vector<PerimeterRegionGraph> prg_;
  std::vector<Table> base_;  // P̂0 ψ_{N(r_p)} over ⊕r_p
  std::vector<Table> beliefs_;
  std::vector<Table> weights_;
  bool partition_mode_ = false;
  mutable std::map<std::pair<int, int>, Table> without_shared_;
};

/// Normalized P̂_{r_p} from the current node beliefs (does not touch the cache).
Table region_belief(const GlcState& s, int p);

/// Partition-mode update of m_{q→p}: the old message times the ratio of the
/// two divided marginals on ⊖r_{p,q}. Applies it and returns it.
Table message_update(GlcState& s, int q, int p, double damping = 0.0);

/// General-mode update of the top node of region p fed by q: the ratio of
/// the divided marginals times b^eff(top)^{cn(top)}. Requires a current
/// upward pass. Applies it and returns it.
Table top_update(GlcState& s, int p, int q, double damping = 0.0);

struct SingleMarginals {
  std::vector<Table> marginals;
  /// Largest max-norm disagreement between regions that own a variable.
  double max_discrepancy = 0.0;
};

/// Marginal of every variable from the lowest-id region that has it as a
/// member. Throws Error("coverage violated") if a variable has no owner.
SingleMarginals single_marginals(const GlcState& s);

/// Largest max-norm gap between the two sides of the pairwise consistency
/// condition over all ordered neighbour pairs (only pairs feeding a top
/// node when tops_only is set).
double consistency_residual(const GlcState& s, bool tops_only = false);

/// Result of a GLC run.
struct GlcResult {
  std::vector<Table> marginals;
  bool converged = false;
  std::size_t iterations = 0;
  double wall_time_seconds = 0.0;
  std::vector<double> change_trace;
  double max_discrepancy = 0.0;
  bool partition_mode = false;
};

/// Runs sweeps over the regions until the largest change of a region belief
/// drops below the tolerance.
GlcResult run_glc(GlcState& s, const GlcOptions& opts = {});
GlcResult run_glc(const FactorGraph& g, RegionCollection collection, std::vector<CavityTable> cavities,
                  const GlcOptions& opts = {});

}  // namespace glc
