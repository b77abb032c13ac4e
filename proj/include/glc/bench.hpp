#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "glc/cavity.hpp"
#include "glc/glc.hpp"
#include "glc/lbp.hpp"

namespace glc {

/// (1/N) Σ_i Σ_v |est_i(v) - exact_i(v)|. Throws Error on domain mismatch.
double avg_marginal_error(const std::vector<Table>& estimate, const std::vector<Table>& exact);
/// max_i max_v |est_i(v) - exact_i(v)|.
double max_marginal_error(const std::vector<Table>& estimate, const std::vector<Table>& exact);

enum class RegionKind { single, factor, loop3, loop4 };
enum class CavityKind { uniform, full, exact };

std::string to_string(RegionKind r);
std::string to_string(CavityKind c);
RegionKind region_kind_from_string(const std::string& s);
CavityKind cavity_kind_from_string(const std::string& s);

RegionCollection build_regions(const FactorGraph& g, RegionKind kind);

/// Cavity tables for every region: uniform, clamped LBP ("full"), or
/// clamped variable elimination.
std::vector<CavityTable> build_cavities(const FactorGraph& g, const RegionCollection& c, CavityKind kind,
                                        const CavityOptions& opts = {});

/// lbp | glc-<regions>-<cavity> | gbp-<regions>
struct MethodSpec {
  enum class Kind { lbp, glc, gbp } kind = Kind::lbp;
  RegionKind regions = RegionKind::single;
  CavityKind cavity = CavityKind::full;

  std::string id() const;
  static MethodSpec parse(const std::string& id);
};

enum class ModelKind { ising_grid, random_grid, regular_ising, ising_cycle, random_tree, uai };

std::string to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& s);

struct ExperimentSpec {
  ModelKind model = ModelKind::ising_grid;
  std::size_t size = 6;  // grid side, or variable count for the other generators
  bool periodic = true;
  double beta = 1.0;
  std::optional<double> field_std;  // defaults: 1 for grids and cycles, β for regular graphs
  std::size_t degree = 3;
  std::string uai_path;
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 0;
  std::size_t replications = 10;
  LbpOptions lbp;
  GlcOptions glc;
  CavityOptions cavity;
};

ExperimentSpec experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentSpec& s);

/// Seed of instance k under the documented stream split.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t k);

/// The model of instance k.
FactorGraph make_instance(const ExperimentSpec& spec, std::size_t k);

struct RunReport {
  std::string method;
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::size_t n_vars = 0;
  double beta = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double avg_error = 0.0;
  double max_error = 0.0;
  double wall_time_seconds = 0.0;
  std::vector<Table> marginals;
  std::vector<double> change_trace;
};

/// Runs one method on one model. Timing covers the method only (cavity
/// estimation included); errors are left at zero.
RunReport run_method(const FactorGraph& g, const MethodSpec& m, const ExperimentSpec& spec);

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RunReport> reports;            // ordered by (method, instance)
  std::vector<std::vector<Table>> exact;     // oracle marginals per instance
};

/// Generates or loads every instance, runs every method and measures the
/// error against variable elimination (excluded from the timings).
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Instances on which every method converged.
std::vector<std::size_t> all_converged_instances(const ExperimentResult& r);

double median(std::vector<double> v);

/// CSV with columns method, instance, seed, n_vars, beta, converged,
/// iterations, avg_error, max_error, time_s, followed by mean and median
/// rows per method over the instances where all methods converged.
void write_csv(std::ostream& out, const ExperimentResult& r);
nlohmann::json experiment_result_to_json(const ExperimentResult& r);

}  // namespace glc
