#include <algorithm>
#include <cmath>
#include <limits>

#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/synth/synth.hpp"

namespace qds::synth {

using dfa::Diagram;
using dfa::NodeId;

namespace {

constexpr std::size_t kMaxEnumVars = 20;

void check_size(const VarRegistry& reg) {
    if (reg.size() > kMaxEnumVars) throw Error("too many variables for enumeration");
}

Valuation valuation(std::size_t in_bits, std::size_t out_bits, const VarRegistry& reg) {
    Valuation v(reg.size());
    const std::size_t ni = reg.num_inputs();
    for (std::size_t k = 0; k < ni; ++k) v[k] = (in_bits >> k) & 1;
    for (std::size_t k = ni; k < reg.size(); ++k) v[k] = (out_bits >> (k - ni)) & 1;
    return v;
}

}  // namespace

ValueTable value_iterate_enumerative(const WeightedArena& arena, unsigned horizon, double gamma,
                                     const VarRegistry& reg) {
    check_size(reg);
    const Dfa& a = arena.automaton;
    auto sink = a.reject_sink();
    const std::size_t ni = reg.num_inputs(), no = reg.size() - ni;
    ValueTable t;
    t.horizon = horizon;
    t.gamma = gamma;
    t.val.assign(horizon + 1, std::vector<double>(a.state_count(), 0.0));
    for (unsigned p = 1; p <= horizon; ++p) {
        for (StateId s = 0; s < a.state_count(); ++s) {
            if (sink && s == *sink) continue;
            double sum = 0;
            for (std::size_t i = 0; i < (std::size_t{1} << ni); ++i) {
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t o = 0; o < (std::size_t{1} << no); ++o) {
                    Valuation v = valuation(i, o, reg);
                    StateId n = a.step(s, v);
                    if (sink && n == *sink) continue;
                    best = std::max(best, arena.weight_of(v) + gamma * t.val[p - 1][n]);
                }
                if (std::isinf(best)) throw Error("arena is blocking in state " + std::to_string(s));
                sum += best;
            }
            t.val[p][s] = sum / static_cast<double>(std::size_t{1} << ni);
        }
    }
    return t;
}

Dfa mphos_enumerative(const WeightedArena& arena, const ValueTable& vals, const VarRegistry& reg) {
    check_size(reg);
    if (vals.horizon == 0) throw Error("horizon must be at least 1");
    const Dfa& a = arena.automaton;
    auto sink_opt = a.reject_sink();
    const StateId sink = sink_opt ? *sink_opt : static_cast<StateId>(a.state_count());
    const std::size_t ni = reg.num_inputs(), no = reg.size() - ni;
    const std::size_t width = reg.size();
    const auto& prev = vals.val[vals.horizon - 1];

    Diagram dd;
    std::vector<NodeId> roots;
    std::vector<bool> acc = a.accepting_set();
    // Table indexed by the full letter (bit k = variable k), then Shannon
    // expansion from the last variable up.
    std::vector<StateId> table(std::size_t{1} << width);
    std::vector<NodeId> level;
    for (StateId s = 0; s < a.state_count(); ++s) {
        if (sink_opt && s == sink) {
            roots.push_back(dd.leaf(sink));
            continue;
        }
        for (std::size_t i = 0; i < (std::size_t{1} << ni); ++i) {
            std::vector<double> q(std::size_t{1} << no, -std::numeric_limits<double>::infinity());
            std::vector<StateId> nxt(q.size());
            double best = q[0];
            for (std::size_t o = 0; o < q.size(); ++o) {
                Valuation v = valuation(i, o, reg);
                nxt[o] = a.step(s, v);
                if (sink_opt && nxt[o] == sink) continue;
                q[o] = arena.weight_of(v) + vals.gamma * prev[nxt[o]];
                best = std::max(best, q[o]);
            }
            for (std::size_t o = 0; o < q.size(); ++o) {
                bool keep = !std::isinf(q[o]) && q[o] >= best - kTieTolerance * std::max(1.0, std::abs(best));
                table[i | (o << ni)] = keep ? nxt[o] : sink;
            }
        }
        level.resize(table.size());
        for (std::size_t k = 0; k < table.size(); ++k) level[k] = dd.leaf(table[k]);
        for (std::size_t v = width; v-- > 0;) {
            std::size_t half = std::size_t{1} << v;
            for (std::size_t k = 0; k < half; ++k) level[k] = dd.node(static_cast<VarId>(v), level[k], level[k + half]);
        }
        roots.push_back(level[0]);
    }
    if (!sink_opt) {
        roots.push_back(dd.leaf(sink));
        acc.push_back(false);
    }
    std::vector<VarId> vars;
    for (VarId v = 0; v < width; ++v) vars.push_back(v);
    return dfa::minimize(Dfa(std::move(vars), std::move(dd), std::move(roots), std::move(acc), a.initial()));
}

}  // namespace qds::synth
