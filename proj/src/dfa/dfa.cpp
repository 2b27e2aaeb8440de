#include "qds/dfa/dfa.hpp"

#include <algorithm>

#include "qds/error.hpp"

namespace qds::dfa {

Dfa::Dfa(std::vector<VarId> vars, Diagram dd, std::vector<NodeId> roots, std::vector<bool> accepting,
         StateId initial)
    : vars_(std::move(vars)), dd_(std::move(dd)), roots_(std::move(roots)), accepting_(std::move(accepting)),
      initial_(initial) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    if (roots_.empty()) throw Error("automaton without states");
    if (accepting_.size() != roots_.size()) throw Error("acceptance vector size mismatch");
    if (initial_ >= roots_.size()) throw Error("initial state out of range");
    for (NodeId r : roots_)
        if (r >= dd_.size()) throw Error("root out of range");
}

Dfa Dfa::universal(std::vector<VarId> vars) {
    Diagram dd;
    NodeId r = dd.leaf(0);
    return Dfa(std::move(vars), std::move(dd), {r}, {true}, 0);
}

Dfa Dfa::empty(std::vector<VarId> vars) {
    Diagram dd;
    NodeId r = dd.leaf(0);
    return Dfa(std::move(vars), std::move(dd), {r}, {false}, 0);
}

bool Dfa::is_sink(StateId s) const {
    return !accepting_[s] && dd_.is_leaf(roots_[s]) && dd_.target(roots_[s]) == s;
}

std::optional<StateId> Dfa::reject_sink() const {
    for (StateId s = 0; s < roots_.size(); ++s)
        if (is_sink(s)) return s;
    return std::nullopt;
}

std::size_t Dfa::live_state_count() const {
    std::size_t n = 0;
    for (StateId s = 0; s < roots_.size(); ++s) n += is_sink(s) ? 0 : 1;
    return n;
}

bool Dfa::reads(VarId v) const { return std::binary_search(vars_.begin(), vars_.end(), v); }

StateId Dfa::step(StateId s, const Valuation& val) const {
    NodeId n = dd_.walk(roots_[s], [&](VarId v) {
        if (v >= val.size()) throw Error("valuation misses variable " + std::to_string(v));
        return static_cast<bool>(val[v]);
    });
    return dd_.target(n);
}

bool accepts(const Dfa& a, const Word& w) {
    if (w.empty()) throw Error("empty word");
    for (VarId v : a.vars())
        if (v >= w.front().size()) throw Error("word misses variable " + std::to_string(v));
    StateId s = a.initial();
    for (const auto& val : w) s = a.step(s, val);
    return a.accepting(s);
}

}  // namespace qds::dfa
