#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>

#include "qds/compile/compiler.hpp"
#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/synth/synth.hpp"

namespace qds::synth {

using dfa::Diagram;
using dfa::kNoNode;
using dfa::NodeId;

double WeightedArena::weight_of(const Valuation& v) const {
    double w = 0;
    for (const auto& t : terms)
        if (v[t.var] == t.positive) w += t.weight;
    return w;
}

namespace {

std::optional<std::pair<VarId, bool>> as_literal(const Prop& p) {
    if (p.kind == Prop::Kind::Var) return std::make_pair(p.var, true);
    if (p.kind == Prop::Kind::Not && p.lhs->kind == Prop::Kind::Var) return std::make_pair(p.lhs->var, false);
    return std::nullopt;
}

std::string fresh_witness(const VarRegistry& reg, std::size_t& counter) {
    for (;;) {
        std::string name = "w" + std::to_string(++counter);
        if (!reg.find(name)) return name;
    }
}

}  // namespace

WeightedArena build_arena(const Dfa& sup, const std::vector<IndicatorBinding>& bindings,
                          const std::vector<SoftReq>& soft, VarRegistry& reg) {
    Dfa a = sup;
    for (const auto& b : bindings) {
        if (b.var >= reg.size() || reg.is_input(b.var))
            throw Error("indicator variable must be an output or witness");
        a = dfa::product(a, indicator(b.formula, b.var, reg), dfa::comb::and_);
    }
    WeightedArena arena{a, {}};
    std::size_t counter = 0;
    for (const auto& s : soft) {
        if (!std::isfinite(s.weight) || s.weight < 0) throw Error("soft requirement weights must be non-negative");
        if (s.prop) {
            auto lit = as_literal(*s.prop);
            if (lit && !reg.is_input(lit->first)) {
                arena.terms.push_back({lit->first, lit->second, s.weight});
                continue;
            }
        }
        FormulaPtr d = s.formula ? s.formula : f::ep(s.prop);
        std::string name = s.witness.empty() ? fresh_witness(reg, counter) : s.witness;
        if (reg.find(name)) throw Error("witness name '" + name + "' collides with an existing variable");
        VarId w = reg.add_witness(name);
        arena.automaton = dfa::product(arena.automaton, indicator(d, w, reg), dfa::comb::and_);
        arena.terms.push_back({w, true, s.weight});
    }
    return arena;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool tied(double cand, double best) { return cand >= best - kTieTolerance * std::max(1.0, std::abs(best)); }

// Per-variable literal bonuses and the helpers the symbolic passes share.
struct Bonus {
    const VarRegistry& reg;
    std::vector<double> b0, b1;  // weight of v=false / v=true
    std::vector<double> pre;     // prefix sums of max(b0, b1)
    VarId first_out;
    VarId width;

    Bonus(const WeightedArena& arena, const VarRegistry& r)
        : reg(r),
          b0(r.size(), 0.0),
          b1(r.size(), 0.0),
          pre(r.size() + 1, 0.0),
          first_out(static_cast<VarId>(r.num_inputs())),
          width(static_cast<VarId>(r.size())) {
        for (const auto& t : arena.terms) {
            if (t.var >= r.size() || r.is_input(t.var)) throw Error("weight term on an input or unknown variable");
            (t.positive ? b1 : b0)[t.var] += t.weight;
        }
        for (VarId v = 0; v < width; ++v) pre[v + 1] = pre[v] + std::max(b0[v], b1[v]);
    }

    VarId level(const Diagram& dd, NodeId n) const { return dd.is_leaf(n) ? width : dd.var(n); }
    // Best bonus of the variables strictly between a and b.
    double between(VarId a, VarId b) const { return pre[b] - pre[a + 1]; }
    // Best bonus of non-input variables above level b.
    double above(VarId b) const { return pre[b] - pre[first_out]; }
};

void check_arena(const WeightedArena& arena, const VarRegistry& reg) {
    for (VarId v : arena.automaton.vars())
        if (v >= reg.size()) throw Error("arena reads a variable outside the registry");
}

// One backup step. For input nodes x holds the expected value, for output
// nodes and leaves the best achievable value below the node.
std::vector<double> backup(const WeightedArena& arena, const Bonus& bon, const std::vector<double>& prev,
                           double gamma, std::optional<StateId> sink) {
    const Dfa& a = arena.automaton;
    const Diagram& dd = a.diagram();
    std::vector<double> x(dd.size());
    for (NodeId n = 0; n < dd.size(); ++n) {
        if (dd.is_leaf(n)) {
            StateId t = dd.target(n);
            x[n] = (sink && t == *sink) ? kNegInf : gamma * prev[t];
            continue;
        }
        VarId v = dd.var(n);
        NodeId lo = dd.lo(n), hi = dd.hi(n);
        if (bon.reg.is_input(v)) {
            auto f = [&](NodeId c) {
                if (!dd.is_leaf(c) && bon.reg.is_input(dd.var(c))) return x[c];
                return bon.above(bon.level(dd, c)) + x[c];
            };
            x[n] = 0.5 * (f(lo) + f(hi));
        } else {
            double l = bon.b0[v] + bon.between(v, bon.level(dd, lo)) + x[lo];
            double h = bon.b1[v] + bon.between(v, bon.level(dd, hi)) + x[hi];
            x[n] = std::max(l, h);
        }
    }
    return x;
}

double root_value(const Dfa& a, const Bonus& bon, const std::vector<double>& x, StateId s) {
    const Diagram& dd = a.diagram();
    NodeId r = a.root(s);
    if (!dd.is_leaf(r) && bon.reg.is_input(dd.var(r))) return x[r];
    return bon.above(bon.level(dd, r)) + x[r];
}

}  // namespace

ValueTable value_iterate(const WeightedArena& arena, unsigned horizon, double gamma, const VarRegistry& reg) {
    check_arena(arena, reg);
    if (!(gamma > 0 && gamma <= 1)) throw Error("discount must lie in (0, 1]");
    const Dfa& a = arena.automaton;
    Bonus bon(arena, reg);
    auto sink = a.reject_sink();
    ValueTable t;
    t.horizon = horizon;
    t.gamma = gamma;
    t.val.assign(horizon + 1, std::vector<double>(a.state_count(), 0.0));
    for (unsigned p = 1; p <= horizon; ++p) {
        auto x = backup(arena, bon, t.val[p - 1], gamma, sink);
        for (StateId s = 0; s < a.state_count(); ++s) {
            if (sink && s == *sink) continue;
            double v = root_value(a, bon, x, s);
            if (std::isinf(v)) throw Error("arena is blocking in state " + std::to_string(s));
            t.val[p][s] = v;
        }
    }
    return t;
}

Dfa mphos(const WeightedArena& arena, const ValueTable& vals, const VarRegistry& reg) {
    check_arena(arena, reg);
    if (vals.horizon == 0) throw Error("horizon must be at least 1");
    const Dfa& a = arena.automaton;
    if (vals.val.back().size() != a.state_count()) throw Error("value table does not match the arena");
    Bonus bon(arena, reg);
    auto sink = a.reject_sink();
    const Diagram& src = a.diagram();
    auto x = backup(arena, bon, vals.val[vals.horizon - 1], vals.gamma, sink);

    const StateId out_sink = sink ? *sink : static_cast<StateId>(a.state_count());
    Diagram dd;
    const NodeId sink_leaf = dd.leaf(out_sink);

    // Restrict skipped variables strictly between levels lo and hi to their
    // better polarity.
    auto force = [&](long lo, VarId hi, NodeId n) {
        for (long u = static_cast<long>(hi) - 1; u > lo; --u) {
            VarId v = static_cast<VarId>(u);
            if (reg.is_input(v) || bon.b0[v] == bon.b1[v]) continue;
            if (bon.b1[v] > bon.b0[v]) n = dd.node(v, sink_leaf, n);
            else n = dd.node(v, n, sink_leaf);
        }
        return n;
    };

    std::vector<NodeId> pmemo(src.size(), kNoNode), tmemo(src.size(), kNoNode);
    std::function<NodeId(NodeId)> prune = [&](NodeId n) -> NodeId {
        if (pmemo[n] != kNoNode) return pmemo[n];
        NodeId r;
        if (src.is_leaf(n)) {
            r = dd.leaf(src.target(n));
        } else {
            VarId v = src.var(n);
            NodeId lo = src.lo(n), hi = src.hi(n);
            double l = bon.b0[v] + bon.between(v, bon.level(src, lo)) + x[lo];
            double h = bon.b1[v] + bon.between(v, bon.level(src, hi)) + x[hi];
            double best = std::max(l, h);
            NodeId nlo = (l != kNegInf && tied(l, best)) ? force(v, bon.level(src, lo), prune(lo)) : sink_leaf;
            NodeId nhi = (h != kNegInf && tied(h, best)) ? force(v, bon.level(src, hi), prune(hi)) : sink_leaf;
            r = dd.node(v, nlo, nhi);
        }
        pmemo[n] = r;
        return r;
    };
    std::function<NodeId(NodeId)> rebuild = [&](NodeId n) -> NodeId {
        if (tmemo[n] != kNoNode) return tmemo[n];
        NodeId r;
        if (!src.is_leaf(n) && reg.is_input(src.var(n))) {
            NodeId lo = rebuild(src.lo(n));
            NodeId hi = rebuild(src.hi(n));
            r = dd.node(src.var(n), lo, hi);
        } else {
            r = force(static_cast<long>(bon.first_out) - 1, bon.level(src, n), prune(n));
        }
        tmemo[n] = r;
        return r;
    };

    std::vector<NodeId> roots;
    std::vector<bool> acc = a.accepting_set();
    for (StateId s = 0; s < a.state_count(); ++s)
        roots.push_back((sink && s == *sink) ? sink_leaf : rebuild(a.root(s)));
    if (!sink) {
        roots.push_back(sink_leaf);
        acc.push_back(false);
    }
    std::vector<VarId> vars = a.vars();
    for (VarId v = bon.first_out; v < bon.width; ++v)
        if (bon.b0[v] != bon.b1[v]) vars.push_back(v);
    return dfa::minimize(Dfa(std::move(vars), std::move(dd), std::move(roots), std::move(acc), a.initial()));
}

}  // namespace qds::synth
