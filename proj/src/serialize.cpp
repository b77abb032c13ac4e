#include "glc/serialize.hpp"

#include "glc/error.hpp"

namespace glc {

json table_to_json(const Table& t) {
  const Table n = normalized(t);
  return {{"scope", n.scope()}, {"cards", n.cards()}, {"values", std::vector<double>(n.values().begin(), n.values().end())}};
}

Table table_from_json(const json& j) {
  const auto values = j.at("values").get<std::vector<double>>();
  Eigen::ArrayXd a = Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return Table(j.at("scope").get<VarSet>(), j.at("cards").get<std::vector<std::size_t>>(), std::move(a));
}

json cavity_to_json(const CavityRegion& region, const CavityTable& cavity) {
  json j = table_to_json(cavity.table);
  j["region"] = cavity.region;
  j["members"] = region.members;
  j["perimeter"] = region.perimeter;
  j["provenance"] = to_string(cavity.provenance);
  j["nonconverged"] = cavity.nonconverged;
  return j;
}

CavityTable cavity_from_json(const json& j, const CavityRegion& region) {
  if (j.at("members").get<VarSet>() != region.members || j.at("perimeter").get<VarSet>() != region.perimeter)
    throw Error("cached cavity does not match region " + std::to_string(region.id));
  CavityTable c;
  c.region = region.id;
  c.table = table_from_json(j);
  if (c.table.scope() != region.perimeter) throw Error("cached cavity scope mismatch");
  c.table = normalized(std::move(c.table));
  c.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  c.nonconverged = j.value("nonconverged", std::size_t{0});
  return c;
}

json cavities_to_json(const RegionCollection& c, const std::vector<CavityTable>& cavities) {
  json arr = json::array();
  for (const CavityTable& t : cavities) arr.push_back(cavity_to_json(c.regions[static_cast<std::size_t>(t.region)], t));
  return {{"regions", collection_to_json(c)}, {"cavities", arr}};
}

std::vector<CavityTable> cavities_from_json(const json& j, const RegionCollection& c) {
  const json& arr = j.at("cavities");
  if (arr.size() != c.size()) throw Error("cached cavities do not match the region collection");
  std::vector<CavityTable> out;
  for (std::size_t p = 0; p < c.size(); ++p) out.push_back(cavity_from_json(arr[p], c.regions[p]));
  return out;
}

json collection_to_json(const RegionCollection& c) {
  json arr = json::array();
  for (const CavityRegion& r : c.regions) arr.push_back(r.members);
  return arr;
}

RegionCollection collection_from_json(const FactorGraph& g, const json& j) {
  return make_collection(g, j.get<std::vector<VarSet>>());
}

json marginals_to_json(const std::vector<Table>& marginals) {
  json arr = json::array();
  for (const Table& m : marginals) arr.push_back(std::vector<double>(m.values().begin(), m.values().end()));
  return arr;
}

std::vector<Table> marginals_from_json(const json& j) {
  std::vector<Table> out;
  for (std::size_t v = 0; v < j.size(); ++v) {
    const auto values = j[v].get<std::vector<double>>();
    Eigen::ArrayXd a = Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    out.emplace_back(VarSet{static_cast<VariableId>(v)}, std::vector<std::size_t>{values.size()}, std::move(a));
  }
  return out;
}

json glc_result_to_json(const GlcResult& r) {
  return {{"marginals", marginals_to_json(r.marginals)},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"wall_time_seconds", r.wall_time_seconds},
          {"change_trace", r.change_trace},
          {"max_discrepancy", r.max_discrepancy}};
}

}  // namespace glc
