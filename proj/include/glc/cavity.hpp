#pragma once

#include <cstddef>
#include <string>

#include "glc/exact.hpp"
#include "glc/factor_graph.hpp"
#include "glc/lbp.hpp"

namespace glc {

/// A connected variable subset r together with its derived sets.
struct CavityRegion {
  int id = 0;
  VarSet members;     // r
  FactorSet factors;  // N(r): every factor touching r
  VarSet plus;        // ⊕r: union of the scopes in N(r)
  VarSet perimeter;   // ⊖r = ⊕r \ r
};

/// Computes the derived sets and checks that the members are connected
/// through their factors. Throws Error("not a cavity region") otherwise.
CavityRegion make_region(const FactorGraph& g, VarSet members, int id = 0);

/// True when the members form one connected component through N(r).
bool is_connected_region(const FactorGraph& g, const VarSet& members);

enum class CavityProvenance { uniform, clamped_lbp, clamped_exact };

std::string to_string(CavityProvenance p);
CavityProvenance provenance_from_string(const std::string& s);

/// Normalized estimate of the cavity distribution over a region's perimeter.
struct CavityTable {
  int region = 0;
  Table table;
  CavityProvenance provenance = CavityProvenance::uniform;
  /// Perimeter assignments whose clamped LBP run did not converge.
  std::size_t nonconverged = 0;
};

CavityTable cavity_uniform(const FactorGraph& g, const CavityRegion& region);

enum class ClampMethod { lbp, exact };

struct CavityOptions {
  ClampMethod method = ClampMethod::lbp;
  LbpOptions lbp;
  EliminationOptions elimination;
  std::size_t max_assignments = std::size_t{1} << 16;
  /// Worker threads for the perimeter sweep; 0 means hardware concurrency.
  unsigned threads = 0;
};

/// Clamping estimate: for every perimeter assignment, remove N(r), clamp the
/// perimeter and estimate log Z of what remains (Bethe for lbp, variable
/// elimination for exact). The table is proportional to those Z values.
CavityTable cavity_estimate_clamp(const FactorGraph& g, const CavityRegion& region,
                                  const CavityOptions& opts = {});

}  // namespace glc
