#include <cmath>

#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/synth/synth.hpp"
#include "rebuild.hpp"

namespace qds::synth {

using dfa::Diagram;
using dfa::NodeId;

namespace {

void check_vars(const Dfa& a, const VarRegistry& reg) {
    for (VarId v : a.vars())
        if (v >= reg.size()) throw Error("automaton reads a variable outside the registry");
}

// Value of every node for a universal/existential evaluation: input nodes
// take the conjunction, output nodes the disjunction.
std::vector<bool> node_game(const Diagram& dd, const VarRegistry& reg, const std::vector<bool>& good_leaf_state) {
    std::vector<bool> val(dd.size());
    for (NodeId n = 0; n < dd.size(); ++n) {
        if (dd.is_leaf(n)) {
            StateId t = dd.target(n);
            val[n] = t < good_leaf_state.size() && good_leaf_state[t];
        } else if (reg.is_input(dd.var(n))) {
            val[n] = val[dd.lo(n)] && val[dd.hi(n)];
        } else {
            val[n] = val[dd.lo(n)] || val[dd.hi(n)];
        }
    }
    return val;
}

}  // namespace

std::vector<bool> cpre(const Dfa& a, const std::vector<bool>& x, const VarRegistry& reg) {
    check_vars(a, reg);
    auto val = node_game(a.diagram(), reg, x);
    std::vector<bool> r(a.state_count());
    for (StateId s = 0; s < a.state_count(); ++s) r[s] = val[a.root(s)];
    return r;
}

MpsResult mps(const Dfa& hard, const VarRegistry& reg) {
    check_vars(hard, reg);
    const std::size_t n = hard.state_count();
    std::vector<bool> g = hard.accepting_set();
    for (;;) {
        auto c = cpre(hard, g, reg);
        std::vector<bool> next(n);
        for (std::size_t s = 0; s < n; ++s) next[s] = g[s] && c[s];
        if (next == g) break;
        g = std::move(next);
    }
    MpsResult res;
    res.winning = g;
    const StateId init = hard.initial();
    res.realizable = cpre(hard, g, reg)[init];
    if (!res.realizable) return res;

    const StateId sink = static_cast<StateId>(n);
    Diagram dd;
    std::vector<NodeId> memo;
    std::vector<NodeId> roots(n + 1);
    std::vector<bool> acc(n + 1, false);
    NodeId sink_leaf = dd.leaf(sink);
    for (StateId s = 0; s < n; ++s) {
        if (g[s] || s == init) {
            roots[s] = detail::map_leaves(hard.diagram(), hard.root(s), dd, memo,
                                          [&](StateId t) { return g[t] ? t : sink; });
            acc[s] = true;
        } else {
            roots[s] = sink_leaf;
        }
    }
    roots[sink] = sink_leaf;
    res.supervisor = dfa::minimize(Dfa(hard.vars(), std::move(dd), std::move(roots), std::move(acc), init));
    return res;
}

Dfa prefix_closure(const Dfa& a) {
    Diagram dd;
    const StateId sink = static_cast<StateId>(a.state_count());
    std::vector<NodeId> memo, roots;
    auto redirect = [&](StateId t) { return a.accepting(t) ? t : sink; };
    for (StateId s = 0; s < a.state_count(); ++s)
        roots.push_back(a.accepting(s) || s == a.initial() ? detail::map_leaves(a.diagram(), a.root(s), dd, memo, redirect)
                                                           : dd.leaf(sink));
    roots.push_back(dd.leaf(sink));
    std::vector<bool> acc = a.accepting_set();
    acc.push_back(false);
    return dfa::minimize(Dfa(a.vars(), std::move(dd), std::move(roots), std::move(acc), a.initial()));
}

std::pair<Dfa, StateId> with_sink(const Dfa& a) {
    if (auto s = a.reject_sink()) return {a, *s};
    Diagram dd = a.diagram();
    auto roots = a.roots();
    auto acc = a.accepting_set();
    const StateId sink = static_cast<StateId>(roots.size());
    roots.push_back(dd.leaf(sink));
    acc.push_back(false);
    return {Dfa(a.vars(), std::move(dd), std::move(roots), std::move(acc), a.initial()), sink};
}

bool is_nonblocking(const Dfa& s, const VarRegistry& reg) {
    check_vars(s, reg);
    auto sink = s.reject_sink();
    std::vector<bool> live(s.state_count(), true);
    if (sink) live[*sink] = false;
    auto c = cpre(s, live, reg);
    for (StateId q = 0; q < s.state_count(); ++q)
        if (live[q] && !c[q]) return false;
    return true;
}

bool is_deterministic(const Dfa& s, const VarRegistry& reg) {
    check_vars(s, reg);
    const Diagram& dd = s.diagram();
    auto sink = s.reject_sink();
    const double width = static_cast<double>(reg.size());
    const VarId first_out = static_cast<VarId>(reg.num_inputs());
    auto level = [&](NodeId n) { return dd.is_leaf(n) ? width : static_cast<double>(dd.var(n)); };
    // Number of legal assignments to the non-input variables at or below the
    // node's level.
    std::vector<double> cnt(dd.size());
    for (NodeId n = 0; n < dd.size(); ++n) {
        if (dd.is_leaf(n)) {
            cnt[n] = (sink && dd.target(n) == *sink) ? 0 : 1;
        } else if (!reg.is_input(dd.var(n))) {
            double v = level(n);
            cnt[n] = cnt[dd.lo(n)] * std::exp2(level(dd.lo(n)) - v - 1) +
                     cnt[dd.hi(n)] * std::exp2(level(dd.hi(n)) - v - 1);
        }
    }
    std::vector<char> seen(dd.size(), 0);
    std::vector<NodeId> stack;
    for (StateId q = 0; q < s.state_count(); ++q)
        if (!sink || q != *sink) stack.push_back(s.root(q));
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (seen[n]) continue;
        seen[n] = 1;
        if (!dd.is_leaf(n) && reg.is_input(dd.var(n))) {
            stack.push_back(dd.lo(n));
            stack.push_back(dd.hi(n));
            continue;
        }
        double total = cnt[n] * std::exp2(level(n) - static_cast<double>(first_out));
        if (total != 1.0) return false;
    }
    return true;
}

}  // namespace qds::synth
