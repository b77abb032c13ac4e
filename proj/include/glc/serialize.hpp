#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "glc/glc.hpp"

namespace glc {

using nlohmann::json;

/// Table as {"scope", "cards", "values"}; values are normalized on output.
json table_to_json(const Table& t);
Table table_from_json(const json& j);

/// Cavity table with its region members and perimeter order.
json cavity_to_json(const CavityRegion& region, const CavityTable& cavity);
/// Checks the stored members and perimeter against `region`.
CavityTable cavity_from_json(const json& j, const CavityRegion& region);

json cavities_to_json(const RegionCollection& c, const std::vector<CavityTable>& cavities);
std::vector<CavityTable> cavities_from_json(const json& j, const RegionCollection& c);

/// Member lists only; derived sets are recomputed on load.
json collection_to_json(const RegionCollection& c);
RegionCollection collection_from_json(const FactorGraph& g, const json& j);

/// Marginals as plain probability vectors, one per variable.
json marginals_to_json(const std::vector<Table>& marginals);
std::vector<Table> marginals_from_json(const json& j);

json glc_result_to_json(const GlcResult& r);

}  // namespace glc
