#pragma once

#include <iosfwd>
#include <string>

#include "qds/dfa/dfa.hpp"
#include "qds/qddc/registry.hpp"

namespace qds::dfa {

// DOT graph with one edge per diagram path, labelled by its literals.
void write_dot(std::ostream& os, const Dfa& a, const VarRegistry& reg, const std::string& name = "dfa");

// Exchange format:
//   INPUTS a,b            (registry; optional when a registry is supplied)
//   OUTPUTS c
//   WITNESSES w
//   VARS a,c              (variables the automaton reads)
//   STATES n INIT i ACCEPTING s1,s2,...
//   src cube dst          (one line per diagram path; cube over 0/1/- in
//                          registry order)
void write_aut(std::ostream& os, const Dfa& a, const VarRegistry& reg);

struct AutFile {
    VarRegistry reg;
    Dfa dfa;
};
AutFile read_aut(std::istream& is);
// Reads an automaton whose header names no registry, or checks the header
// against `reg`.
Dfa read_aut(std::istream& is, const VarRegistry& reg);

std::string cube_string(const std::vector<std::pair<VarId, bool>>& literals, std::size_t width);

}  // namespace qds::dfa
