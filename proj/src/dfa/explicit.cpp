#include "qds/dfa/explicit.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "qds/error.hpp"

namespace qds::dfa {

ExplicitDfa::ExplicitDfa(std::vector<VarId> vars, std::vector<std::vector<StateId>> delta, std::vector<bool> accepting,
                         StateId initial)
    : vars_(std::move(vars)), delta_(std::move(delta)), accepting_(std::move(accepting)), initial_(initial) {
    if (!std::is_sorted(vars_.begin(), vars_.end())) throw Error("explicit dfa: vars must be sorted");
    if (vars_.size() > kMaxVars) throw Error("explicit dfa: alphabet too large");
    if (delta_.empty() || accepting_.size() != delta_.size() || initial_ >= delta_.size())
        throw Error("explicit dfa: malformed table");
    for (auto& row : delta_) {
        if (row.size() != letter_count()) throw Error("explicit dfa: row size mismatch");
        for (auto t : row)
            if (t >= delta_.size()) throw Error("explicit dfa: target out of range");
    }
}

std::size_t ExplicitDfa::letter_of(const Valuation& v) const {
    std::size_t l = 0;
    for (std::size_t k = 0; k < vars_.size(); ++k) {
        if (vars_[k] >= v.size()) throw Error("valuation misses variable " + std::to_string(vars_[k]));
        if (v[vars_[k]]) l |= std::size_t{1} << k;
    }
    return l;
}

bool accepts(const ExplicitDfa& a, const Word& w) {
    if (w.empty()) throw Error("empty word");
    StateId s = a.initial();
    for (auto& v : w) s = a.step(s, v);
    return a.accepting(s);
}

namespace {

std::vector<VarId> union_vars(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    std::vector<VarId> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

// Maps letters over `to` onto letters over the subset `from`.
std::vector<std::size_t> restriction(const std::vector<VarId>& from, const std::vector<VarId>& to) {
    std::vector<std::size_t> r(std::size_t{1} << to.size());
    for (std::size_t l = 0; l < r.size(); ++l) {
        std::size_t x = 0;
        for (std::size_t k = 0; k < from.size(); ++k) {
            auto pos = std::lower_bound(to.begin(), to.end(), from[k]) - to.begin();
            if ((l >> pos) & 1) x |= std::size_t{1} << k;
        }
        r[l] = x;
    }
    return r;
}

// Breadth-first renumbering from the initial state; drops unreachable states.
ExplicitDfa renumber(const ExplicitDfa& a) {
    std::vector<StateId> idx(a.state_count(), kNoNode);
    std::vector<StateId> order{a.initial()};
    idx[a.initial()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t l = 0; l < a.letter_count(); ++l) {
            StateId t = a.next(order[i], l);
            if (idx[t] == kNoNode) {
                idx[t] = static_cast<StateId>(order.size());
                order.push_back(t);
            }
        }
    std::vector<std::vector<StateId>> delta;
    std::vector<bool> acc;
    for (StateId s : order) {
        std::vector<StateId> row;
        for (std::size_t l = 0; l < a.letter_count(); ++l) row.push_back(idx[a.next(s, l)]);
        delta.push_back(std::move(row));
        acc.push_back(a.accepting(s));
    }
    return ExplicitDfa(a.vars(), std::move(delta), std::move(acc), 0);
}

bool reentered(const ExplicitDfa& a, StateId target) {
    for (auto& row : a.table())
        for (auto t : row)
            if (t == target) return true;
    return false;
}

// Determinizes an NFA given by a successor function on state sets.
template <class Succ>
ExplicitDfa subset(std::vector<VarId> vars, std::vector<StateId> init, const Succ& succ,
                   const std::vector<bool>& final) {
    std::map<std::vector<StateId>, StateId> ids;
    std::vector<std::vector<StateId>> sets;
    auto id_of = [&](std::vector<StateId> s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        StateId id = static_cast<StateId>(sets.size());
        ids.emplace(s, id);
        sets.push_back(std::move(s));
        return id;
    };
    id_of(std::move(init));
    std::size_t letters = std::size_t{1} << vars.size();
    std::vector<std::vector<StateId>> delta;
    std::vector<bool> acc;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::vector<StateId> row;
        for (std::size_t l = 0; l < letters; ++l) {
            std::vector<StateId> cur = sets[i];
            row.push_back(id_of(succ(cur, l)));
        }
        bool f = false;
        for (auto q : sets[i]) f = f || final[q];
        delta.push_back(std::move(row));
        acc.push_back(f);
    }
    return minimize(ExplicitDfa(std::move(vars), std::move(delta), std::move(acc), 0));
}

}  // namespace

ExplicitDfa product(const ExplicitDfa& a, const ExplicitDfa& b, Combiner combine) {
    auto vars = union_vars(a.vars(), b.vars());
    auto ra = restriction(a.vars(), vars), rb = restriction(b.vars(), vars);
    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::vector<std::pair<StateId, StateId>> pairs;
    auto id_of = [&](StateId x, StateId y) {
        auto [it, fresh] = ids.emplace(std::pair{x, y}, static_cast<StateId>(pairs.size()));
        if (fresh) pairs.emplace_back(x, y);
        return it->second;
    };
    id_of(a.initial(), b.initial());
    std::vector<std::vector<StateId>> delta;
    std::vector<bool> acc;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [x, y] = pairs[i];
        std::vector<StateId> row;
        for (std::size_t l = 0; l < ra.size(); ++l) row.push_back(id_of(a.next(x, ra[l]), b.next(y, rb[l])));
        delta.push_back(std::move(row));
        acc.push_back(combine(a.accepting(x), b.accepting(y)));
    }
    return minimize(ExplicitDfa(vars, std::move(delta), std::move(acc), 0));
}

ExplicitDfa complement(const ExplicitDfa& a) {
    std::vector<bool> acc(a.state_count());
    for (StateId s = 0; s < a.state_count(); ++s) acc[s] = !a.accepting(s);
    return minimize(ExplicitDfa(a.vars(), a.table(), std::move(acc), a.initial()));
}

ExplicitDfa fusion(const ExplicitDfa& a, const ExplicitDfa& b) {
    auto vars = union_vars(a.vars(), b.vars());
    auto ra = restriction(a.vars(), vars), rb = restriction(b.vars(), vars);
    const StateId na = static_cast<StateId>(a.state_count());
    std::vector<bool> final(na + b.state_count(), false);
    for (StateId s = 0; s < b.state_count(); ++s) final[na + s] = b.accepting(s);
    auto succ = [&](const std::vector<StateId>& set, std::size_t l) {
        std::vector<StateId> out;
        for (StateId q : set) {
            if (q < na) {
                StateId t = a.next(q, ra[l]);
                out.push_back(t);
                if (a.accepting(t)) out.push_back(na + b.next(b.initial(), rb[l]));
            } else {
                out.push_back(na + b.next(q - na, rb[l]));
            }
        }
        return out;
    };
    return subset(vars, {a.initial()}, succ, final);
}

ExplicitDfa project(const ExplicitDfa& a, VarId v) {
    auto pos = std::find(a.vars().begin(), a.vars().end(), v);
    if (pos == a.vars().end()) throw Error("project: variable not read by automaton");
    std::vector<VarId> vars = a.vars();
    vars.erase(vars.begin() + (pos - a.vars().begin()));
    std::size_t k = pos - a.vars().begin();
    auto succ = [&](const std::vector<StateId>& set, std::size_t l) {
        std::size_t low = l & ((std::size_t{1} << k) - 1);
        std::size_t high = (l >> k) << (k + 1);
        std::vector<StateId> out;
        for (StateId q : set) {
            out.push_back(a.next(q, high | low));
            out.push_back(a.next(q, high | low | (std::size_t{1} << k)));
        }
        return out;
    };
    return subset(vars, {a.initial()}, succ, a.accepting_set());
}

ExplicitDfa minimize(const ExplicitDfa& in) {
    ExplicitDfa a = renumber(in);
    const std::size_t n = a.state_count(), m = a.letter_count();
    const bool free_init = !reentered(a, a.initial());
    auto acc_of = [&](StateId s) { return a.accepting(s) && !(free_init && s == a.initial()); };

    // Hopcroft.
    std::vector<std::uint32_t> block(n);
    std::vector<std::vector<StateId>> members(2);
    for (StateId s = 0; s < n; ++s) {
        block[s] = acc_of(s) ? 1 : 0;
        members[block[s]].push_back(s);
    }
    if (members[0].empty() || members[1].empty()) {
        members = {std::vector<StateId>()};
        for (StateId s = 0; s < n; ++s) {
            block[s] = 0;
            members[0].push_back(s);
        }
    }
    std::vector<std::vector<std::vector<StateId>>> inv(m, std::vector<std::vector<StateId>>(n));
    for (StateId s = 0; s < n; ++s)
        for (std::size_t l = 0; l < m; ++l) inv[l][a.next(s, l)].push_back(s);
    std::vector<bool> in_work(members.size(), true);
    std::deque<std::uint32_t> work;
    for (std::uint32_t b = 0; b < members.size(); ++b) work.push_back(b);
    while (!work.empty()) {
        std::uint32_t splitter = work.front();
        work.pop_front();
        in_work[splitter] = false;
        std::vector<StateId> target = members[splitter];
        for (std::size_t l = 0; l < m; ++l) {
            std::map<std::uint32_t, std::vector<StateId>> hit;
            for (StateId t : target)
                for (StateId s : inv[l][t]) hit[block[s]].push_back(s);
            for (auto& [y, xs] : hit) {
                std::sort(xs.begin(), xs.end());
                xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
                if (xs.size() == members[y].size()) continue;
                std::vector<StateId> rest;
                std::set_difference(members[y].begin(), members[y].end(), xs.begin(), xs.end(),
                                    std::back_inserter(rest));
                auto z = static_cast<std::uint32_t>(members.size());
                members[y] = xs;
                members.push_back(rest);
                in_work.push_back(false);
                for (StateId s : rest) block[s] = z;
                if (in_work[y] || members[z].size() <= members[y].size()) {
                    work.push_back(z);
                    in_work[z] = true;
                } else {
                    work.push_back(y);
                    in_work[y] = true;
                }
            }
        }
    }
    std::vector<std::vector<StateId>> delta(members.size(), std::vector<StateId>(m));
    std::vector<bool> acc(members.size());
    for (std::uint32_t b = 0; b < members.size(); ++b) {
        StateId rep = members[b].front();
        for (std::size_t l = 0; l < m; ++l) delta[b][l] = block[a.next(rep, l)];
        acc[b] = acc_of(rep);
    }
    ExplicitDfa q = renumber(ExplicitDfa(a.vars(), std::move(delta), std::move(acc), block[a.initial()]));
    if (reentered(q, q.initial())) return q;
    for (StateId s = 0; s < q.state_count(); ++s) {
        if (s == q.initial() || !q.accepting(s) || q.table()[s] != q.table()[q.initial()]) continue;
        return renumber(ExplicitDfa(q.vars(), q.table(), q.accepting_set(), s));
    }
    return q;
}

bool is_empty(const ExplicitDfa& a) {
    std::vector<bool> seen(a.state_count(), false);
    std::vector<StateId> work;
    for (std::size_t l = 0; l < a.letter_count(); ++l) {
        StateId t = a.next(a.initial(), l);
        if (!seen[t]) {
            seen[t] = true;
            work.push_back(t);
        }
    }
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        if (a.accepting(s)) return false;
        for (std::size_t l = 0; l < a.letter_count(); ++l) {
            StateId t = a.next(s, l);
            if (!seen[t]) {
                seen[t] = true;
                work.push_back(t);
            }
        }
    }
    return true;
}

bool language_equal(const ExplicitDfa& a, const ExplicitDfa& b) { return is_empty(product(a, b, comb::xor_)); }

ExplicitDfa to_explicit(const Dfa& a) {
    const auto& vars = a.vars();
    if (vars.size() > ExplicitDfa::kMaxVars) throw Error("to_explicit: alphabet too large");
    std::vector<std::vector<StateId>> delta(a.state_count());
    std::size_t letters = std::size_t{1} << vars.size();
    for (StateId s = 0; s < a.state_count(); ++s) {
        for (std::size_t l = 0; l < letters; ++l) {
            NodeId n = a.diagram().walk(a.root(s), [&](VarId v) {
                auto k = std::lower_bound(vars.begin(), vars.end(), v) - vars.begin();
                return ((l >> k) & 1) != 0;
            });
            delta[s].push_back(a.diagram().target(n));
        }
    }
    return ExplicitDfa(vars, std::move(delta), a.accepting_set(), a.initial());
}

Dfa from_explicit(const ExplicitDfa& a) {
    Diagram dd;
    const auto& vars = a.vars();
    std::vector<NodeId> roots;
    for (StateId s = 0; s < a.state_count(); ++s) {
        // Build bottom-up over the letter index: variable k splits on bit k.
        auto rec = [&](auto& self, std::size_t k, std::size_t l) -> NodeId {
            if (k == vars.size()) return dd.leaf(a.next(s, l));
            NodeId lo = self(self, k + 1, l);
            NodeId hi = self(self, k + 1, l | (std::size_t{1} << k));
            return dd.node(vars[k], lo, hi);
        };
        roots.push_back(rec(rec, 0, 0));
    }
    return Dfa(vars, std::move(dd), std::move(roots), a.accepting_set(), a.initial());
}

}  // namespace qds::dfa
