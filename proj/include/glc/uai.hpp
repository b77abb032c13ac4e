#pragma once

#include <iosfwd>
#include <string>

#include "glc/factor_graph.hpp"

namespace glc {

/// Reads a model in the UAI competition format. Both MARKOV and BAYES
/// preambles are accepted; BAYES CPTs are read as plain factors. Tables are
/// row-major over the scope order given in the file (last variable fastest).
FactorGraph read_uai(std::istream& in);
FactorGraph read_uai_file(const std::string& path);

/// Writes a MARKOV model with canonical (ascending) scopes. Entries are
/// printed with round-trip precision.
void write_uai(std::ostream& out, const FactorGraph& g);
void write_uai_file(const std::string& path, const FactorGraph& g);

}  // namespace glc
