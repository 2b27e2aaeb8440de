#pragma once

#include <optional>
#include <vector>

#include "qds/dfa/diagram.hpp"
#include "qds/qddc/eval.hpp"

namespace qds::dfa {

// Total DFA over valuations of `vars`, with one diagram root per state.
// Immutable once built.
class Dfa {
public:
    Dfa(std::vector<VarId> vars, Diagram dd, std::vector<NodeId> roots, std::vector<bool> accepting,
        StateId initial);

    // Accepts every nonempty word.
    static Dfa universal(std::vector<VarId> vars = {});
    // Accepts nothing.
    static Dfa empty(std::vector<VarId> vars = {});

    std::size_t state_count() const { return roots_.size(); }
    StateId initial() const { return initial_; }
    bool accepting(StateId s) const { return accepting_[s]; }
    const std::vector<bool>& accepting_set() const { return accepting_; }
    const std::vector<VarId>& vars() const { return vars_; }
    const Diagram& diagram() const { return dd_; }
    NodeId root(StateId s) const { return roots_[s]; }
    const std::vector<NodeId>& roots() const { return roots_; }

    // Non-accepting state whose every transition loops back to itself.
    bool is_sink(StateId s) const;
    std::optional<StateId> reject_sink() const;
    // States other than the reject sink.
    std::size_t live_state_count() const;

    StateId step(StateId s, const Valuation& v) const;
    bool reads(VarId v) const;

private:
    std::vector<VarId> vars_;
    Diagram dd_;
    std::vector<NodeId> roots_;
    std::vector<bool> accepting_;
    StateId initial_;
};

bool accepts(const Dfa& a, const Word& w);

}  // namespace qds::dfa
