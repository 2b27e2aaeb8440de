#include "qds/dfa/ops.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "qds/error.hpp"

namespace qds::dfa {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) { return static_cast<std::uint64_t>(a) << 32 | b; }

std::vector<VarId> merge_vars(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    std::vector<VarId> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

// Visits the distinct leaves under `root`, using `stamp` to skip shared nodes.
class LeafVisitor {
public:
    explicit LeafVisitor(const Diagram& dd) : dd_(dd), seen_(dd.size(), 0) {}

    template <class F>
    void visit(NodeId root, const F& on_leaf) {
        if (++epoch_ == 0) {
            std::fill(seen_.begin(), seen_.end(), 0);
            epoch_ = 1;
        }
        stack_.clear();
        stack_.push_back(root);
        while (!stack_.empty()) {
            NodeId n = stack_.back();
            stack_.pop_back();
            if (seen_[n] == epoch_) continue;
            seen_[n] = epoch_;
            if (dd_.is_leaf(n)) {
                on_leaf(dd_.target(n));
            } else {
                stack_.push_back(dd_.hi(n));
                stack_.push_back(dd_.lo(n));
            }
        }
    }

private:
    const Diagram& dd_;
    std::vector<std::uint32_t> seen_;
    std::uint32_t epoch_ = 0;
    std::vector<NodeId> stack_;
};

// Rebuilds `a` with states renumbered in breadth-first order from the
// initial state; leaves are discovered lo-branch first. Unreachable states
// and unused nodes are dropped. The result depends only on the structure of
// the reachable part, which makes minimal automata canonical.
Dfa canonicalize(const Dfa& a) {
    const Diagram& dd = a.diagram();
    std::vector<StateId> order;
    std::vector<StateId> index(a.state_count(), kNoNode);
    index[a.initial()] = 0;
    order.push_back(a.initial());
    // Depth-first over each state's diagram, lo before hi; discovery order
    // is a pure function of the diagram.
    std::vector<NodeId> stack;
    std::vector<std::uint32_t> seen(dd.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto epoch = static_cast<std::uint32_t>(i + 1);
        stack.clear();
        stack.push_back(a.root(order[i]));
        while (!stack.empty()) {
            NodeId n = stack.back();
            stack.pop_back();
            if (seen[n] == epoch) continue;
            seen[n] = epoch;
            if (dd.is_leaf(n)) {
                StateId t = dd.target(n);
                if (index[t] == kNoNode) {
                    index[t] = static_cast<StateId>(order.size());
                    order.push_back(t);
                }
            } else {
                stack.push_back(dd.hi(n));
                stack.push_back(dd.lo(n));
            }
        }
    }
    Diagram out;
    std::vector<NodeId> map(dd.size(), kNoNode);
    auto build = [&](auto& self, NodeId n) -> NodeId {
        if (map[n] != kNoNode) return map[n];
        NodeId r = dd.is_leaf(n) ? out.leaf(index[dd.target(n)])
                                 : [&] {
                                       NodeId lo = self(self, dd.lo(n));
                                       NodeId hi = self(self, dd.hi(n));
                                       return out.node(dd.var(n), lo, hi);
                                   }();
        map[n] = r;
        return r;
    };
    std::vector<NodeId> roots;
    std::vector<bool> acc;
    roots.reserve(order.size());
    for (StateId s : order) {
        roots.push_back(build(build, a.root(s)));
        acc.push_back(a.accepting(s));
    }
    return Dfa(a.vars(), std::move(out), std::move(roots), std::move(acc), 0);
}

bool has_incoming(const Dfa& a, StateId target) {
    LeafVisitor lv(a.diagram());
    bool found = false;
    for (StateId s = 0; s < a.state_count() && !found; ++s)
        lv.visit(a.root(s), [&](StateId t) { found = found || t == target; });
    return found;
}

// Moore partition refinement. An initial state that is never re-entered is
// only visited by the empty word, so its acceptance is forced to false.
// Returns the quotient (not yet canonically numbered).
Dfa refine(const Dfa& a) {
    const std::size_t n = a.state_count();
    const Diagram& dd = a.diagram();
    const bool free_init = !has_incoming(a, a.initial());
    auto acc_of = [&](StateId s) { return a.accepting(s) && !(free_init && s == a.initial()); };
    std::vector<std::uint32_t> cls(n);
    for (StateId s = 0; s < n; ++s) cls[s] = acc_of(s) ? 1 : 0;
    std::uint32_t num = 0;
    {
        bool has0 = false, has1 = false;
        for (auto c : cls) (c ? has1 : has0) = true;
        if (has0 && has1) {
            num = 2;
        } else {
            num = 1;
            std::fill(cls.begin(), cls.end(), 0);
        }
    }
    std::vector<NodeId> map(dd.size(), kNoNode);
    while (true) {
        Diagram q;
        std::fill(map.begin(), map.end(), kNoNode);
        auto build = [&](auto& self, NodeId x) -> NodeId {
            if (map[x] != kNoNode) return map[x];
            NodeId r;
            if (dd.is_leaf(x)) {
                r = q.leaf(cls[dd.target(x)]);
            } else {
                NodeId lo = self(self, dd.lo(x));
                NodeId hi = self(self, dd.hi(x));
                r = q.node(dd.var(x), lo, hi);
            }
            map[x] = r;
            return r;
        };
        std::vector<NodeId> sig_root(n);
        std::unordered_map<std::uint64_t, std::uint32_t> sig;
        sig.reserve(2 * num);
        std::vector<std::uint32_t> next(n);
        for (StateId s = 0; s < n; ++s) {
            sig_root[s] = build(build, a.root(s));
            auto [it, fresh] = sig.emplace(pack(cls[s], sig_root[s]), static_cast<std::uint32_t>(sig.size()));
            next[s] = it->second;
        }
        if (sig.size() == num) {
            std::vector<NodeId> roots(num, kNoNode);
            std::vector<bool> acc(num, false);
            for (StateId s = 0; s < n; ++s) {
                roots[cls[s]] = sig_root[s];
                acc[cls[s]] = acc_of(s);
            }
            return Dfa(a.vars(), std::move(q), std::move(roots), std::move(acc), cls[a.initial()]);
        }
        num = static_cast<std::uint32_t>(sig.size());
        cls.swap(next);
    }
}

}  // namespace

PairGraph explore_pairs(const Dfa& a, const Dfa& b, const std::vector<std::pair<StateId, StateId>>& starts) {
    PairGraph g;
    std::unordered_map<std::uint64_t, StateId> ids;
    std::unordered_map<std::uint64_t, NodeId> memo;
    const Diagram& da = a.diagram();
    const Diagram& db = b.diagram();
    auto id_of = [&](StateId x, StateId y) {
        auto [it, fresh] = ids.emplace(pack(x, y), static_cast<StateId>(g.pairs.size()));
        if (fresh) g.pairs.emplace_back(x, y);
        return it->second;
    };
    for (auto [x, y] : starts) id_of(x, y);

    auto apply = [&](auto& self, NodeId na, NodeId nb) -> NodeId {
        std::uint64_t key = pack(na, nb);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        NodeId r;
        bool la = da.is_leaf(na), lb = db.is_leaf(nb);
        if (la && lb) {
            r = g.dd.leaf(id_of(da.target(na), db.target(nb)));
        } else {
            VarId va = la ? kLeafVar : da.var(na);
            VarId vb = lb ? kLeafVar : db.var(nb);
            VarId v = std::min(va, vb);
            NodeId a0 = va == v ? da.lo(na) : na, a1 = va == v ? da.hi(na) : na;
            NodeId b0 = vb == v ? db.lo(nb) : nb, b1 = vb == v ? db.hi(nb) : nb;
            NodeId lo = self(self, a0, b0);
            NodeId hi = self(self, a1, b1);
            r = g.dd.node(v, lo, hi);
        }
        memo.emplace(key, r);
        return r;
    };
    for (std::size_t i = 0; i < g.pairs.size(); ++i) {
        auto [x, y] = g.pairs[i];
        NodeId r = apply(apply, a.root(x), b.root(y));
        g.roots.push_back(r);
    }
    return g;
}

Dfa product(const Dfa& a, const Dfa& b, Combiner combine) {
    PairGraph g = explore_pairs(a, b, {{a.initial(), b.initial()}});
    std::vector<bool> acc;
    acc.reserve(g.pairs.size());
    for (auto [x, y] : g.pairs) acc.push_back(combine(a.accepting(x), b.accepting(y)));
    return minimize(Dfa(merge_vars(a.vars(), b.vars()), std::move(g.dd), std::move(g.roots), std::move(acc), 0));
}

Dfa complement(const Dfa& a) {
    std::vector<bool> acc(a.state_count());
    for (StateId s = 0; s < a.state_count(); ++s) acc[s] = !a.accepting(s);
    return minimize(Dfa(a.vars(), a.diagram(), a.roots(), std::move(acc), a.initial()));
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
        for (auto x : v) {
            h ^= x;
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

// Input for on-the-fly subset construction over one merged diagram.
struct SubsetSpec {
    Diagram dd;
    std::vector<NodeId> roots;       // per NFA state
    std::vector<bool> final;         // per NFA state
    std::vector<bool> trigger;       // reaching one enables the conditional root
    NodeId cond_root = kNoNode;      // added to every subset, conditionally
    std::vector<VarId> erase;        // sorted; merged instead of branched on
    std::vector<StateId> initial;
    std::vector<VarId> vars;
};

Dfa subset_construction(const SubsetSpec& sp) {
    const Diagram& dd = sp.dd;
    Diagram out;
    std::unordered_map<std::vector<StateId>, StateId, VecHash> subset_id;
    std::vector<std::vector<StateId>> subsets;
    std::unordered_map<std::vector<std::uint32_t>, NodeId, VecHash> memo;

    auto id_of = [&](std::vector<StateId> set) {
        auto it = subset_id.find(set);
        if (it != subset_id.end()) return it->second;
        StateId id = static_cast<StateId>(subsets.size());
        subset_id.emplace(set, id);
        subsets.push_back(std::move(set));
        return id;
    };
    auto is_erased = [&](VarId v) { return std::binary_search(sp.erase.begin(), sp.erase.end(), v); };

    // Entries are node << 1 | conditional.
    auto descend = [&](auto& self, std::vector<std::uint32_t> entries) -> NodeId {
        std::sort(entries.begin(), entries.end());
        entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
        auto it = memo.find(entries);
        if (it != memo.end()) return it->second;
        VarId v = kLeafVar;
        for (auto e : entries) {
            NodeId n = e >> 1;
            if (!dd.is_leaf(n)) v = std::min(v, dd.var(n));
        }
        NodeId r;
        if (v == kLeafVar) {
            bool fire = false;
            for (auto e : entries)
                if (!(e & 1) && !sp.trigger.empty() && sp.trigger[dd.target(e >> 1)]) fire = true;
            std::vector<StateId> set;
            for (auto e : entries)
                if (!(e & 1) || fire) set.push_back(dd.target(e >> 1));
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            r = out.leaf(id_of(std::move(set)));
        } else if (is_erased(v)) {
            std::vector<std::uint32_t> next;
            next.reserve(entries.size() + 4);
            for (auto e : entries) {
                NodeId n = e >> 1;
                if (!dd.is_leaf(n) && dd.var(n) == v) {
                    next.push_back(dd.lo(n) << 1 | (e & 1));
                    next.push_back(dd.hi(n) << 1 | (e & 1));
                } else {
                    next.push_back(e);
                }
            }
            r = self(self, std::move(next));
        } else {
            std::vector<std::uint32_t> lo, hi;
            lo.reserve(entries.size());
            hi.reserve(entries.size());
            for (auto e : entries) {
                NodeId n = e >> 1;
                if (!dd.is_leaf(n) && dd.var(n) == v) {
                    lo.push_back(dd.lo(n) << 1 | (e & 1));
                    hi.push_back(dd.hi(n) << 1 | (e & 1));
                } else {
                    lo.push_back(e);
                    hi.push_back(e);
                }
            }
            NodeId l = self(self, std::move(lo));
            NodeId h = self(self, std::move(hi));
            r = out.node(v, l, h);
        }
        memo.emplace(std::move(entries), r);
        return r;
    };

    std::vector<StateId> init = sp.initial;
    std::sort(init.begin(), init.end());
    init.erase(std::unique(init.begin(), init.end()), init.end());
    id_of(init);
    std::vector<NodeId> roots;
    std::vector<bool> acc;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        std::vector<std::uint32_t> entries;
        for (StateId q : subsets[i]) entries.push_back(sp.roots[q] << 1);
        if (sp.cond_root != kNoNode) entries.push_back(sp.cond_root << 1 | 1);
        NodeId r = descend(descend, std::move(entries));
        roots.push_back(r);
        bool f = false;
        for (StateId q : subsets[i]) f = f || sp.final[q];
        acc.push_back(f);
    }
    return minimize(Dfa(sp.vars, std::move(out), std::move(roots), std::move(acc), 0));
}

// Copies the nodes of `src` into `dst`, shifting leaf targets by `offset`.
std::vector<NodeId> import_diagram(Diagram& dst, const Diagram& src, StateId offset) {
    std::vector<NodeId> map(src.size());
    for (NodeId n = 0; n < src.size(); ++n) {
        map[n] = src.is_leaf(n) ? dst.leaf(src.target(n) + offset) : dst.node(src.var(n), map[src.lo(n)], map[src.hi(n)]);
    }
    return map;
}

}  // namespace

Dfa fusion(const Dfa& a, const Dfa& b) {
    SubsetSpec sp;
    const StateId na = static_cast<StateId>(a.state_count());
    auto ma = import_diagram(sp.dd, a.diagram(), 0);
    auto mb = import_diagram(sp.dd, b.diagram(), na);
    for (StateId s = 0; s < na; ++s) {
        sp.roots.push_back(ma[a.root(s)]);
        sp.final.push_back(false);
        sp.trigger.push_back(a.accepting(s));
    }
    for (StateId s = 0; s < b.state_count(); ++s) {
        sp.roots.push_back(mb[b.root(s)]);
        sp.final.push_back(b.accepting(s));
        sp.trigger.push_back(false);
    }
    sp.cond_root = mb[b.root(b.initial())];
    sp.initial = {a.initial()};
    sp.vars = merge_vars(a.vars(), b.vars());
    return subset_construction(sp);
}

Dfa project(const Dfa& a, VarId v) { return project(a, std::vector<VarId>{v}); }

Dfa project(const Dfa& a, const std::vector<VarId>& vs) {
    SubsetSpec sp;
    for (VarId v : vs)
        if (!a.reads(v)) throw Error("project: variable " + std::to_string(v) + " not read by automaton");
    auto m = import_diagram(sp.dd, a.diagram(), 0);
    for (StateId s = 0; s < a.state_count(); ++s) {
        sp.roots.push_back(m[a.root(s)]);
        sp.final.push_back(a.accepting(s));
    }
    sp.erase = vs;
    std::sort(sp.erase.begin(), sp.erase.end());
    sp.initial = {a.initial()};
    for (VarId v : a.vars())
        if (!std::binary_search(sp.erase.begin(), sp.erase.end(), v)) sp.vars.push_back(v);
    return subset_construction(sp);
}

Dfa trim(const Dfa& a) { return canonicalize(a); }

Dfa minimize(const Dfa& a) {
    Dfa m = canonicalize(refine(canonicalize(a)));
    // The initial state's acceptance is irrelevant for nonempty words. If
    // the initial state has no incoming transitions and behaves exactly like
    // an accepting state, it can be merged into that state.
    const StateId init = m.initial();
    if (has_incoming(m, init)) return m;
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (q == init || !m.accepting(q) || m.root(q) != m.root(init)) continue;
        return canonicalize(Dfa(m.vars(), m.diagram(), m.roots(), m.accepting_set(), q));
    }
    return m;
}

bool is_minimal(const Dfa& a) { return minimize(a).state_count() == a.state_count(); }

bool is_empty(const Dfa& a) {
    LeafVisitor lv(a.diagram());
    std::vector<bool> seen(a.state_count(), false);
    std::vector<StateId> work;
    lv.visit(a.root(a.initial()), [&](StateId t) {
        if (!seen[t]) {
            seen[t] = true;
            work.push_back(t);
        }
    });
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        if (a.accepting(s)) return false;
        lv.visit(a.root(s), [&](StateId t) {
            if (!seen[t]) {
                seen[t] = true;
                work.push_back(t);
            }
        });
    }
    return true;
}

bool language_equal(const Dfa& a, const Dfa& b) {
    PairGraph g = explore_pairs(a, b, {{a.initial(), b.initial()}});
    std::vector<bool> acc;
    for (auto [x, y] : g.pairs) acc.push_back(a.accepting(x) != b.accepting(y));
    return is_empty(Dfa(merge_vars(a.vars(), b.vars()), std::move(g.dd), std::move(g.roots), std::move(acc), 0));
}

bool included(const Dfa& a, const Dfa& b) {
    PairGraph g = explore_pairs(a, b, {{a.initial(), b.initial()}});
    std::vector<bool> acc;
    for (auto [x, y] : g.pairs) acc.push_back(a.accepting(x) && !b.accepting(y));
    return is_empty(Dfa(merge_vars(a.vars(), b.vars()), std::move(g.dd), std::move(g.roots), std::move(acc), 0));
}

std::optional<Word> shortest_accepted(const Dfa& a, std::size_t width) {
    const Diagram& dd = a.diagram();
    struct Parent {
        StateId from;
        std::vector<std::pair<VarId, bool>> cube;
        std::size_t depth;
    };
    std::vector<std::optional<Parent>> parent(a.state_count());
    std::deque<StateId> queue;
    std::vector<std::uint32_t> seen(dd.size(), 0);
    std::uint32_t epoch = 0;
    // Records a path to every state first reached from s.
    auto expand = [&](StateId s, std::size_t depth) -> std::optional<StateId> {
        ++epoch;
        std::vector<std::pair<VarId, bool>> prefix;
        std::optional<StateId> hit;
        auto rec = [&](auto& self, NodeId n) -> void {
            if (hit || seen[n] == epoch) return;
            seen[n] = epoch;
            if (dd.is_leaf(n)) {
                StateId t = dd.target(n);
                if (!parent[t]) {
                    parent[t] = Parent{s, prefix, depth + 1};
                    queue.push_back(t);
                    if (a.accepting(t)) hit = t;
                }
                return;
            }
            prefix.emplace_back(dd.var(n), false);
            self(self, dd.lo(n));
            prefix.back().second = true;
            self(self, dd.hi(n));
            prefix.pop_back();
        };
        rec(rec, a.root(s));
        return hit;
    };
    std::optional<StateId> hit = expand(a.initial(), 0);
    while (!hit && !queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        hit = expand(s, parent[s]->depth);
    }
    if (!hit) return std::nullopt;
    Word w;
    StateId cur = *hit;
    for (std::size_t k = parent[cur]->depth; k > 0; --k) {
        const Parent& p = *parent[cur];
        Valuation val(width, false);
        for (auto [v, b] : p.cube)
            if (v < width) val[v] = b;
        w.push_back(std::move(val));
        cur = p.from;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

bool identical(const Dfa& a, const Dfa& b) {
    if (a.state_count() != b.state_count() || a.initial() != b.initial()) return false;
    if (a.accepting_set() != b.accepting_set() || a.roots() != b.roots()) return false;
    const Diagram& x = a.diagram();
    const Diagram& y = b.diagram();
    if (x.size() != y.size()) return false;
    for (NodeId n = 0; n < x.size(); ++n) {
        if (x.var(n) != y.var(n) || x.lo(n) != y.lo(n) || (!x.is_leaf(n) && x.hi(n) != y.hi(n))) return false;
    }
    return true;
}

}  // namespace qds::dfa
