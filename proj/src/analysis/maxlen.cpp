#include <algorithm>

#include "qds/analysis/analysis.hpp"
#include "qds/compile/compiler.hpp"
#include "qds/dfa/ops.hpp"

namespace qds::analysis {

namespace {

// Distinct leaf targets below each root.
std::vector<std::vector<StateId>> successors(const dfa::Diagram& dd, const std::vector<dfa::NodeId>& roots) {
    std::vector<std::vector<StateId>> below(dd.size());
    for (dfa::NodeId n = 0; n < dd.size(); ++n) {
        if (dd.is_leaf(n)) {
            below[n] = {dd.target(n)};
            continue;
        }
        const auto& a = below[dd.lo(n)];
        const auto& b = below[dd.hi(n)];
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(below[n]));
    }
    std::vector<std::vector<StateId>> r;
    r.reserve(roots.size());
    for (auto n : roots) r.push_back(below[n]);
    return r;
}

}  // namespace

MaxLen maxlen(const Dfa& m, const FormulaPtr& d, const VarRegistry& reg) {
    const auto sink = m.reject_sink();
    auto live = [&](StateId s) { return !sink || s != *sink; };

    // Every reachable live state of m may start a fragment.
    auto msucc = successors(m.diagram(), m.roots());
    std::vector<bool> seen(m.state_count(), false);
    std::vector<StateId> order{m.initial()};
    seen[m.initial()] = true;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (StateId t : msucc[order[i]])
            if (!seen[t] && live(t)) {
                seen[t] = true;
                order.push_back(t);
            }
    Dfa ad = compile(d, reg);
    std::vector<std::pair<StateId, StateId>> starts;
    for (StateId s : order)
        if (live(s)) starts.push_back({s, ad.initial()});
    auto g = dfa::explore_pairs(m, ad, starts);
    auto succ = successors(g.dd, g.roots);
    const std::size_t n = g.pairs.size();
    auto ok = [&](StateId q) { return live(g.pairs[q].first); };
    auto goal = [&](StateId q) { return ok(q) && ad.accepting(g.pairs[q].second); };

    // Longest edge count to an accepting pair, by DFS with cycle detection
    // on the pairs that can still reach one.
    constexpr long kNone = -1;
    std::vector<std::vector<StateId>> pred(n);
    for (StateId q = 0; q < n; ++q)
        if (ok(q))
            for (StateId t : succ[q])
                if (ok(t)) pred[t].push_back(q);
    std::vector<bool> useful(n, false);
    std::vector<StateId> work;
    for (StateId q = 0; q < n; ++q)
        if (goal(q)) {
            useful[q] = true;
            work.push_back(q);
        }
    while (!work.empty()) {
        StateId q = work.back();
        work.pop_back();
        for (StateId p : pred[q])
            if (!useful[p]) {
                useful[p] = true;
                work.push_back(p);
            }
    }

    enum : char { White, Grey, Black };
    std::vector<char> colour(n, White);
    std::vector<long> best(n, kNone);
    MaxLen r;
    std::vector<std::pair<StateId, std::size_t>> call;
    for (std::size_t i = 0; i < starts.size() && !r.infinite; ++i) {
        if (!useful[i] || colour[i] != White) continue;
        call.push_back({static_cast<StateId>(i), 0});
        colour[i] = Grey;
        while (!call.empty()) {
            auto& [q, k] = call.back();
            if (k < succ[q].size()) {
                StateId t = succ[q][k++];
                if (!ok(t) || !useful[t]) continue;
                if (colour[t] == Grey) {
                    r.infinite = true;
                    break;
                }
                if (colour[t] == White) {
                    colour[t] = Grey;
                    call.push_back({t, 0});
                }
                continue;
            }
            long b = kNone;
            for (StateId t : succ[q]) {
                if (!ok(t) || !useful[t]) continue;
                long via = std::max(goal(t) ? 0L : kNone, best[t]);
                if (via != kNone) b = std::max(b, via + 1);
            }
            best[q] = b;
            colour[q] = Black;
            call.pop_back();
        }
    }
    if (r.infinite) return r;
    long top = kNone;
    for (std::size_t i = 0; i < starts.size(); ++i) top = std::max(top, best[i]);
    // A path of k letters spans an interval [b, e] with e - b = k - 1.
    if (top == kNone) r.unsatisfiable = true;
    else r.value = static_cast<std::size_t>(top - 1);
    return r;
}

}  // namespace qds::analysis
