#pragma once

#include <cstddef>
#include <vector>

#include "glc/cavity.hpp"

namespace glc {

/// A collection of cavity regions covering every variable, with the
/// neighbour relation Nb(p) and all perimeter intersections
/// ⊖r_{p,q} = ⊖r_p ∩ r_q.
struct RegionCollection {
  std::vector<CavityRegion> regions;
  bool is_partition = false;
  std::vector<std::vector<int>> nb;               // ascending region ids
  std::vector<std::vector<VarSet>> intersections;  // [p][q]

  std::size_t size() const { return regions.size(); }
  const VarSet& intersection(int p, int q) const {
    return intersections[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
  }
};

/// Builds regions from member sets in the given order, dropping repeated
/// member sets (first occurrence wins) and computing the derived tables.
/// Throws Error("coverage violated") if some variable is in no region.
RegionCollection make_collection(const FactorGraph& g, const std::vector<VarSet>& member_sets);

RegionCollection partition_single_variables(const FactorGraph& g);

/// One region per distinct factor scope, in factor order. Variables that
/// no factor touches get a singleton region.
RegionCollection clusters_factor_domains(const FactorGraph& g);

/// Simple cycles of 3..max_len variables in the co-occurrence graph (two
/// variables adjacent iff they share a factor). Each cycle is listed once,
/// starting at its smallest vertex, its second vertex smaller than its last.
std::vector<std::vector<VariableId>> enumerate_cycles(const FactorGraph& g, std::size_t max_len);

/// Loop clusters: the vertex set of every simple cycle of length <= max_len,
/// in ascending lexicographic order, followed by the scope of every factor
/// not contained in any loop region (and singletons for untouched variables).
RegionCollection clusters_loops(const FactorGraph& g, std::size_t max_len);

}  // namespace glc
