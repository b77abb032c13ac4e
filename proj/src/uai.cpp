#include "glc/uai.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "glc/error.hpp"

namespace glc {

namespace {

template <typename T>
T next(std::istream& in, const char* what) {
  T value{};
  if (!(in >> value)) throw Error(std::string("UAI parse error: expected ") + what);
  return value;
}

}  // namespace

FactorGraph read_uai(std::istream& in) {
  const auto type = next<std::string>(in, "model type");
  if (type != "MARKOV" && type != "BAYES") throw Error("UAI parse error: unsupported model type " + type);

  const auto n = next<std::size_t>(in, "variable count");
  std::vector<std::size_t> cards(n);
  for (auto& c : cards) c = next<std::size_t>(in, "cardinality");

  const auto nf = next<std::size_t>(in, "factor count");
  std::vector<std::vector<VariableId>> scopes(nf);
  for (auto& scope : scopes) {
    const auto k = next<std::size_t>(in, "scope size");
    scope.resize(k);
    for (auto& v : scope) {
      v = next<VariableId>(in, "scope variable");
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw Error("UAI parse error: variable id out of range");
    }
  }

  std::vector<Table> factors;
  factors.reserve(nf);
  for (const auto& scope : scopes) {
    std::vector<std::size_t> scope_cards;
    for (VariableId v : scope) scope_cards.push_back(cards[static_cast<std::size_t>(v)]);
    const auto count = next<std::size_t>(in, "table size");
    std::vector<double> entries(count);
    for (auto& e : entries) e = next<double>(in, "table entry");
    factors.push_back(Table::from_ordered(scope, scope_cards, entries));
  }
  return FactorGraph(std::move(cards), std::move(factors));
}

FactorGraph read_uai_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_uai(in);
}

void write_uai(std::ostream& out, const FactorGraph& g) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "MARKOV\n" << g.num_variables() << '\n';
  for (std::size_t i = 0; i < g.num_variables(); ++i) out << (i ? " " : "") << g.cardinality(static_cast<VariableId>(i));
  out << '\n' << g.num_factors() << '\n';
  for (const Table& f : g.factors()) {
    out << f.scope().size();
    for (VariableId v : f.scope()) out << ' ' << v;
    out << '\n';
  }
  for (const Table& f : g.factors()) {
    out << '\n' << f.size() << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? " " : "") << f[i];
    out << '\n';
  }
  out.precision(old_precision);
}

void write_uai_file(const std::string& path, const FactorGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_uai(out, g);
}

}  // namespace glc
