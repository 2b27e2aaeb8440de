#pragma once

#include <vector>

#include "qds/dfa/dfa.hpp"
#include "qds/dfa/ops.hpp"

namespace qds::dfa {

// Dense transition table over the letters of `vars`; letter bit k is the
// value of vars[k]. Meant for small alphabets (tests and oracles).
class ExplicitDfa {
public:
    static constexpr std::size_t kMaxVars = 16;

    ExplicitDfa(std::vector<VarId> vars, std::vector<std::vector<StateId>> delta, std::vector<bool> accepting,
                StateId initial);

    std::size_t state_count() const { return delta_.size(); }
    std::size_t letter_count() const { return std::size_t{1} << vars_.size(); }
    StateId initial() const { return initial_; }
    bool accepting(StateId s) const { return accepting_[s]; }
    const std::vector<bool>& accepting_set() const { return accepting_; }
    const std::vector<VarId>& vars() const { return vars_; }
    StateId next(StateId s, std::size_t letter) const { return delta_[s][letter]; }
    const std::vector<std::vector<StateId>>& table() const { return delta_; }

    std::size_t letter_of(const Valuation& v) const;
    StateId step(StateId s, const Valuation& v) const { return next(s, letter_of(v)); }

private:
    std::vector<VarId> vars_;
    std::vector<std::vector<StateId>> delta_;
    std::vector<bool> accepting_;
    StateId initial_;
};

bool accepts(const ExplicitDfa& a, const Word& w);
ExplicitDfa product(const ExplicitDfa& a, const ExplicitDfa& b, Combiner combine);
ExplicitDfa complement(const ExplicitDfa& a);
ExplicitDfa fusion(const ExplicitDfa& a, const ExplicitDfa& b);
ExplicitDfa project(const ExplicitDfa& a, VarId v);
// Hopcroft partition refinement; same empty-word convention as the diagram
// backend.
ExplicitDfa minimize(const ExplicitDfa& a);
bool is_empty(const ExplicitDfa& a);
bool language_equal(const ExplicitDfa& a, const ExplicitDfa& b);

ExplicitDfa to_explicit(const Dfa& a);
Dfa from_explicit(const ExplicitDfa& a);

}  // namespace qds::dfa
