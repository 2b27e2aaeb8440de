#include "qds/compile/compiler.hpp"

#include <algorithm>
#include <functional>

#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"

namespace qds {

using dfa::Dfa;
using dfa::Diagram;
using dfa::NodeId;
using dfa::StateId;

namespace {

std::vector<VarId> prop_vars(const Prop& p) {
    std::vector<VarId> vs;
    collect_vars(p, vs);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

// Decision diagram of p with the given terminals, by Shannon expansion.
NodeId prop_diagram(Diagram& dd, const Prop& p, const std::vector<VarId>& vars, NodeId t, NodeId f) {
    if (vars.size() > 24) throw Error("propositional formula over too many variables");
    std::vector<std::pair<VarId, bool>> assign;
    auto rec = [&](auto& self, std::size_t i) -> NodeId {
        if (i == vars.size()) {
            bool r = eval_prop(p, [&](VarId v) {
                for (auto& [x, b] : assign)
                    if (x == v) return b;
                return false;
            });
            return r ? t : f;
        }
        assign.emplace_back(vars[i], false);
        NodeId lo = self(self, i + 1);
        assign.back().second = true;
        NodeId hi = self(self, i + 1);
        assign.pop_back();
        return dd.node(vars[i], lo, hi);
    };
    return rec(rec, 0);
}

// Small automaton whose transitions depend only on whether the letter
// satisfies p: next[s] = {target if p fails, target if p holds}.
Dfa letter_automaton(const PropPtr& p, const std::vector<std::pair<StateId, StateId>>& next,
                     const std::vector<bool>& acc) {
    Diagram dd;
    std::vector<VarId> vars = p ? prop_vars(*p) : std::vector<VarId>{};
    std::vector<NodeId> roots;
    for (auto [no, yes] : next) {
        NodeId f = dd.leaf(no), t = dd.leaf(yes);
        roots.push_back(p ? prop_diagram(dd, *p, vars, t, f) : t);
    }
    return dfa::minimize(Dfa(vars, std::move(dd), std::move(roots), acc, 0));
}

}  // namespace

Dfa count_automaton(const CountKind& kind, Cmp op, unsigned c, const VarRegistry&) {
    const StateId top = c + 1;
    std::vector<std::pair<StateId, StateId>> next;
    std::vector<bool> acc;
    auto sat = [&](StateId i) { return std::min(i, top); };
    if (kind.kind == CountKind::Kind::Sdur) {
        // State 1 + 2*i + b: i letters satisfying p before the last one, b
        // whether the last letter satisfies p.
        auto id = [](StateId i, StateId b) { return 1 + 2 * i + b; };
        next.emplace_back(id(0, 0), id(0, 1));
        acc.push_back(false);
        for (StateId i = 0; i <= top; ++i) {
            for (StateId b = 0; b < 2; ++b) {
                StateId j = sat(i + b);
                next.emplace_back(id(j, 0), id(j, 1));
                acc.push_back(compare(i, op, c));
            }
        }
        return letter_automaton(kind.prop, next, acc);
    }
    // State 1 + i: saturated count i.
    const bool counts_letters = kind.kind == CountKind::Kind::Scount;
    auto step = [&](StateId i, bool holds) { return 1 + sat(i + (counts_letters ? (holds ? 1 : 0) : 1)); };
    if (counts_letters) {
        next.emplace_back(1 + 0, 1 + 1);
    } else {
        next.emplace_back(1 + 0, 1 + 0);
    }
    acc.push_back(false);
    for (StateId i = 0; i <= top; ++i) {
        next.emplace_back(step(i, false), step(i, true));
        acc.push_back(compare(i, op, c));
    }
    return letter_automaton(counts_letters ? kind.prop : nullptr, next, acc);
}

Dfa Compiler::compile(const FormulaPtr& d) {
    std::string key = structural_key(*d);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Dfa r = is_derived(d->kind) ? compile(rewrite_derived(d)) : compile_core(*d);
    if (observer_) observer_(r);
    cache_.emplace(std::move(key), r);
    return r;
}

Dfa Compiler::compile_core(const Formula& d) {
    using K = Formula::Kind;
    // States: 0 initial, then as listed; the last one is the sink.
    switch (d.kind) {
        case K::Point:  // 0 -p-> 1 (accept); everything else to 2
            return letter_automaton(d.prop, {{2, 1}, {2, 2}, {2, 2}}, {false, true, false});
        case K::Front:  // 1: all p so far; 2: same, length >= 2; 3: last letter broke p
            return letter_automaton(d.prop, {{4, 1}, {3, 2}, {3, 2}, {4, 4}, {4, 4}},
                                    {false, false, true, true, false});
        case K::All:
            return letter_automaton(d.prop, {{2, 1}, {2, 1}, {2, 2}}, {false, true, false});
        case K::Unit:
            return letter_automaton(d.prop, {{3, 1}, {2, 2}, {3, 3}, {3, 3}}, {false, false, true, false});
        case K::Univ:
            return Dfa::universal();
        case K::Chop:
            return dfa::fusion(compile(d.lhs), compile(d.rhs));
        case K::Not:
            return dfa::complement(compile(d.lhs));
        case K::And:
            return dfa::product(compile(d.lhs), compile(d.rhs), dfa::comb::and_);
        case K::Or:
            return dfa::product(compile(d.lhs), compile(d.rhs), dfa::comb::or_);
        case K::Ex: {
            Dfa body = compile(d.lhs);
            return body.reads(d.var) ? dfa::project(body, d.var) : body;
        }
        case K::AllQ: {
            Dfa body = dfa::complement(compile(d.lhs));
            Dfa ex = body.reads(d.var) ? dfa::project(body, d.var) : body;
            return dfa::complement(ex);
        }
        case K::Slen:
            return count_automaton({CountKind::Kind::Slen, nullptr}, d.cmp, d.constant, reg_);
        case K::Scount:
            return count_automaton({CountKind::Kind::Scount, d.prop}, d.cmp, d.constant, reg_);
        case K::Sdur:
            return count_automaton({CountKind::Kind::Sdur, d.prop}, d.cmp, d.constant, reg_);
        default:
            throw Error("compile: unexpected derived construct");
    }
}

Dfa compile(const FormulaPtr& d, const VarRegistry& reg) { return Compiler(reg).compile(d); }

Dfa indicator(const Dfa& ad, VarId w) {
    if (ad.reads(w)) throw Error("indicator: witness variable already read by the formula");
    const Diagram& src = ad.diagram();
    const StateId sink = static_cast<StateId>(ad.state_count());
    Diagram dd;
    // Copy of a sub-diagram with every leaf q' replaced by q' if w agrees
    // with acceptance of q', else by the sink.
    std::vector<NodeId> memo_fixed[2] = {std::vector<NodeId>(src.size(), dfa::kNoNode),
                                         std::vector<NodeId>(src.size(), dfa::kNoNode)};
    std::function<NodeId(NodeId, int)> fixed = [&](NodeId n, int wv) -> NodeId {
        NodeId& m = memo_fixed[wv][n];
        if (m != dfa::kNoNode) return m;
        if (src.is_leaf(n)) {
            StateId t = src.target(n);
            m = dd.leaf(ad.accepting(t) == (wv == 1) ? t : sink);
        } else {
            NodeId lo = fixed(src.lo(n), wv);
            NodeId hi = fixed(src.hi(n), wv);
            m = dd.node(src.var(n), lo, hi);
        }
        return m;
    };
    std::vector<NodeId> memo(src.size(), dfa::kNoNode);
    std::function<NodeId(NodeId)> insert = [&](NodeId n) -> NodeId {
        if (memo[n] != dfa::kNoNode) return memo[n];
        NodeId r;
        if (src.is_leaf(n) || src.var(n) > w) {
            NodeId lo = fixed(n, 0);
            NodeId hi = fixed(n, 1);
            r = dd.node(w, lo, hi);
        } else {
            NodeId lo = insert(src.lo(n));
            NodeId hi = insert(src.hi(n));
            r = dd.node(src.var(n), lo, hi);
        }
        memo[n] = r;
        return r;
    };
    std::vector<NodeId> roots;
    std::vector<bool> acc;
    for (StateId s = 0; s < ad.state_count(); ++s) {
        roots.push_back(insert(ad.root(s)));
        acc.push_back(true);
    }
    roots.push_back(dd.leaf(sink));
    acc.push_back(false);
    std::vector<VarId> vars = ad.vars();
    vars.push_back(w);
    return dfa::minimize(Dfa(std::move(vars), std::move(dd), std::move(roots), std::move(acc), ad.initial()));
}

Dfa indicator(const FormulaPtr& d, VarId w, const VarRegistry& reg) {
    auto fv = free_vars(*d);
    if (std::binary_search(fv.begin(), fv.end(), w)) throw Error("indicator: witness variable occurs in the formula");
    return indicator(compile(d, reg), w);
}

}  // namespace qds
