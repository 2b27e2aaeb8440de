#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qds/dfa/dfa.hpp"

namespace qds::dfa {

using Combiner = bool (*)(bool, bool);

namespace comb {
inline bool and_(bool a, bool b) { return a && b; }
inline bool or_(bool a, bool b) { return a || b; }
inline bool xor_(bool a, bool b) { return a != b; }
inline bool and_not(bool a, bool b) { return a && !b; }
inline bool implies(bool a, bool b) { return !a || b; }
}  // namespace comb

// Reachable synchronous product of a and b started from the given state
// pairs. Leaves of `dd` index into `pairs`. Not minimized.
struct PairGraph {
    Diagram dd;
    std::vector<NodeId> roots;
    std::vector<std::pair<StateId, StateId>> pairs;
};
PairGraph explore_pairs(const Dfa& a, const Dfa& b, const std::vector<std::pair<StateId, StateId>>& starts);

Dfa product(const Dfa& a, const Dfa& b, Combiner combine);
Dfa complement(const Dfa& a);
Dfa fusion(const Dfa& a, const Dfa& b);
Dfa project(const Dfa& a, VarId v);
Dfa project(const Dfa& a, const std::vector<VarId>& vs);

// Removes unreachable states and unused diagram nodes.
Dfa trim(const Dfa& a);
// Canonical minimal DFA for the language over nonempty words. Equal
// languages give identical automata (same numbering and diagram).
Dfa minimize(const Dfa& a);
// True when the automaton equals its own minimization.
bool is_minimal(const Dfa& a);

// Emptiness over nonempty words.
bool is_empty(const Dfa& a);
bool language_equal(const Dfa& a, const Dfa& b);
// L(a) is a subset of L(b).
bool included(const Dfa& a, const Dfa& b);
// A shortest accepted nonempty word; `width` is the valuation size.
std::optional<Word> shortest_accepted(const Dfa& a, std::size_t width);

// Structural identity of two automata (after minimize this decides equality).
bool identical(const Dfa& a, const Dfa& b);

}  // namespace qds::dfa
