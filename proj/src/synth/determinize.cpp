#include <algorithm>
#include <functional>
#include <sstream>

#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/synth/synth.hpp"

namespace qds::synth {

using dfa::Diagram;
using dfa::kNoNode;
using dfa::NodeId;

OutputOrdering parse_ordering(const std::string& text, const VarRegistry& reg) {
    OutputOrdering ord;
    std::string item;
    std::string norm = text;
    std::replace(norm.begin(), norm.end(), '>', ',');
    std::istringstream in(norm);
    while (std::getline(in, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = item.find_last_not_of(" \t");
        item = item.substr(b, e - b + 1);
        bool pos = true;
        if (item[0] == '!') {
            pos = false;
            item = item.substr(1);
        }
        auto v = reg.find(item);
        if (!v) throw Error("unknown variable '" + item + "' in output ordering");
        if (reg.is_input(*v)) throw Error("output ordering mentions input '" + item + "'");
        ord.push_back({*v, pos});
    }
    return ord;
}

std::string to_string(const OutputOrdering& ord, const VarRegistry& reg) {
    std::string s;
    for (const auto& l : ord) s += (s.empty() ? "" : ",") + std::string(l.positive ? "" : "!") + reg.name(l.var);
    return s;
}

namespace {

// Full priority list: ordering literals first (first mention wins), then the
// remaining non-inputs preferring false.
std::vector<Literal> priority(const OutputOrdering& ord, const VarRegistry& reg) {
    std::vector<Literal> p;
    std::vector<bool> used(reg.size(), false);
    for (const auto& l : ord) {
        if (l.var >= reg.size() || reg.is_input(l.var)) throw Error("output ordering mentions a non-output variable");
        if (used[l.var]) continue;
        used[l.var] = true;
        p.push_back(l);
    }
    for (VarId v : reg.non_inputs())
        if (!used[v]) p.push_back({v, false});
    return p;
}

}  // namespace

bool ranks_above(const Valuation& x, const Valuation& y, const OutputOrdering& ord, const VarRegistry& reg) {
    for (const auto& l : priority(ord, reg)) {
        bool xs = x[l.var] == l.positive, ys = y[l.var] == l.positive;
        if (xs != ys) return xs;
    }
    return false;
}

Dfa determinize(const Dfa& sup_in, const OutputOrdering& ord, const VarRegistry& reg) {
    for (VarId v : sup_in.vars())
        if (v >= reg.size()) throw Error("supervisor reads a variable outside the registry");
    auto [sup, sink] = with_sink(sup_in);
    const auto prio = priority(ord, reg);
    const auto outs = reg.non_inputs();
    const Diagram& src = sup.diagram();

    Diagram dd;
    const NodeId sink_leaf = dd.leaf(sink);
    std::vector<signed char> assign(reg.size(), -1);

    std::function<bool(NodeId)> legal = [&](NodeId n) -> bool {
        if (src.is_leaf(n)) return src.target(n) != sink;
        signed char a = assign[src.var(n)];
        if (a == 0) return legal(src.lo(n));
        if (a == 1) return legal(src.hi(n));
        return legal(src.lo(n)) || legal(src.hi(n));
    };

    std::vector<NodeId> fmemo(src.size(), kNoNode), memo(src.size(), kNoNode);
    auto frontier = [&](NodeId n) -> NodeId {
        if (fmemo[n] != kNoNode) return fmemo[n];
        std::fill(assign.begin(), assign.end(), -1);
        NodeId r;
        if (!legal(n)) {
            r = sink_leaf;
        } else {
            for (const auto& l : prio) {
                assign[l.var] = l.positive ? 1 : 0;
                if (!legal(n)) assign[l.var] = l.positive ? 0 : 1;
            }
            NodeId leaf = src.walk(n, [&](VarId v) { return assign[v] == 1; });
            r = dd.leaf(src.target(leaf));
            for (auto it = outs.rbegin(); it != outs.rend(); ++it)
                r = assign[*it] == 1 ? dd.node(*it, sink_leaf, r) : dd.node(*it, r, sink_leaf);
        }
        fmemo[n] = r;
        return r;
    };
    std::function<NodeId(NodeId)> rebuild = [&](NodeId n) -> NodeId {
        if (memo[n] != kNoNode) return memo[n];
        NodeId r;
        if (!src.is_leaf(n) && reg.is_input(src.var(n))) {
            NodeId lo = rebuild(src.lo(n));
            NodeId hi = rebuild(src.hi(n));
            r = dd.node(src.var(n), lo, hi);
        } else {
            r = frontier(n);
        }
        memo[n] = r;
        return r;
    };

    std::vector<NodeId> roots;
    for (StateId s = 0; s < sup.state_count(); ++s) roots.push_back(s == sink ? sink_leaf : rebuild(sup.root(s)));
    std::vector<VarId> vars = sup.vars();
    vars.insert(vars.end(), outs.begin(), outs.end());
    return dfa::minimize(Dfa(std::move(vars), std::move(dd), std::move(roots), sup.accepting_set(), sup.initial()));
}

}  // namespace qds::synth
