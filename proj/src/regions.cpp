#include "glc/regions.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "glc/error.hpp"

namespace glc {

RegionCollection make_collection(const FactorGraph& g, const std::vector<VarSet>& member_sets) {
  RegionCollection c;
  std::set<VarSet> seen;
  for (const VarSet& raw : member_sets) {
    VarSet members = make_varset(raw);
    if (!seen.insert(members).second) continue;
    c.regions.push_back(make_region(g, members, static_cast<int>(c.regions.size())));
  }

  std::vector<int> cover(g.num_variables(), 0);
  for (const auto& r : c.regions)
    for (VariableId v : r.members) ++cover[static_cast<std::size_t>(v)];
  if (std::find(cover.begin(), cover.end(), 0) != cover.end()) throw Error("coverage violated");
  c.is_partition = std::all_of(cover.begin(), cover.end(), [](int n) { return n == 1; });

  const std::size_t m = c.regions.size();
  c.nb.assign(m, {});
  c.intersections.assign(m, std::vector<VarSet>(m));
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      if (p == q) continue;
      c.intersections[p][q] = set_intersection(c.regions[p].perimeter, c.regions[q].members);
      if (!c.intersections[p][q].empty()) c.nb[p].push_back(static_cast<int>(q));
    }
  }
  return c;
}

RegionCollection partition_single_variables(const FactorGraph& g) {
  std::vector<VarSet> sets;
  for (std::size_t v = 0; v < g.num_variables(); ++v) sets.push_back({static_cast<VariableId>(v)});
  return make_collection(g, sets);
}

namespace {

void add_uncovered_singletons(const FactorGraph& g, std::vector<VarSet>& sets) {
  std::vector<bool> covered(g.num_variables(), false);
  for (const auto& s : sets)
    for (VariableId v : s) covered[static_cast<std::size_t>(v)] = true;
  for (std::size_t v = 0; v < g.num_variables(); ++v)
    if (!covered[v]) sets.push_back({static_cast<VariableId>(v)});
}

}  // namespace

RegionCollection clusters_factor_domains(const FactorGraph& g) {
  std::vector<VarSet> sets;
  for (const Table& f : g.factors())
    if (!f.scope().empty()) sets.push_back(f.scope());
  add_uncovered_singletons(g, sets);
  return make_collection(g, sets);
}

std::vector<std::vector<VariableId>> enumerate_cycles(const FactorGraph& g, std::size_t max_len) {
  const std::size_t n = g.num_variables();
  std::vector<VarSet> adj(n);
  for (const Table& f : g.factors())
    for (VariableId a : f.scope())
      for (VariableId b : f.scope())
        if (a != b) adj[static_cast<std::size_t>(a)].push_back(b);
  for (auto& a : adj) a = make_varset(std::move(a));

  std::vector<std::vector<VariableId>> cycles;
  std::vector<VariableId> path;
  std::vector<bool> on_path(n, false);
  std::function<void(VariableId)> extend = [&](VariableId v) {
    const VariableId start = path.front();
    for (VariableId w : adj[static_cast<std::size_t>(v)]) {
      if (w == start) {
        if (path.size() >= 3 && path[1] < path.back()) cycles.push_back(path);
      } else if (w > start && !on_path[static_cast<std::size_t>(w)] && path.size() < max_len) {
        path.push_back(w);
        on_path[static_cast<std::size_t>(w)] = true;
        extend(w);
        on_path[static_cast<std::size_t>(w)] = false;
        path.pop_back();
      }
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path.assign(1, static_cast<VariableId>(s));
    on_path[s] = true;
    extend(static_cast<VariableId>(s));
    on_path[s] = false;
  }
  return cycles;
}

RegionCollection clusters_loops(const FactorGraph& g, std::size_t max_len) {
  if (max_len < 3) throw Error("loop length must be at least 3");
  std::set<VarSet> loops;
  for (const auto& cycle : enumerate_cycles(g, max_len)) loops.insert(make_varset(cycle));
  std::vector<VarSet> sets(loops.begin(), loops.end());
  for (const Table& f : g.factors()) {
    if (f.scope().empty()) continue;
    const bool inside = std::any_of(loops.begin(), loops.end(), [&](const VarSet& l) { return is_subset(f.scope(), l); });
    if (!inside) sets.push_back(f.scope());
  }
  add_uncovered_singletons(g, sets);
  return make_collection(g, sets);
}

}  // namespace glc
