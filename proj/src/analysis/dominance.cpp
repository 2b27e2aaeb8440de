#include "qds/analysis/analysis.hpp"
#include "qds/compile/compiler.hpp"
#include "qds/dfa/ops.hpp"

namespace qds::analysis {

Dfa must_inputs(const Dfa& s, const FormulaPtr& c, const VarRegistry& reg) {
    // Input words with some legal output violating C, then the rest.
    Dfa bad = dfa::product(s, dfa::complement(compile(c, reg)), dfa::comb::and_);
    std::vector<VarId> hidden;
    for (VarId v : bad.vars())
        if (!reg.is_input(v)) hidden.push_back(v);
    return dfa::minimize(dfa::complement(dfa::project(bad, hidden)));
}

Dominance check_dominance(const Dfa& s1, const Dfa& s2, const FormulaPtr& c, const VarRegistry& reg) {
    Dfa gap = dfa::product(must_inputs(s1, c, reg), must_inputs(s2, c, reg), dfa::comb::and_not);
    Dominance r;
    r.holds = dfa::is_empty(gap);
    if (!r.holds) r.counterexample = dfa::shortest_accepted(gap, reg.size());
    return r;
}

}  // namespace qds::analysis
