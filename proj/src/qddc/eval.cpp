#include "qds/qddc/eval.hpp"

#include <map>
#include <optional>

#include "qds/error.hpp"

namespace qds {

namespace {

// Tracks of bound variables, one bit per word position.
using Env = std::map<VarId, std::vector<bool>>;

struct Evaluator {
    const Word& w;
    Env env;

    bool point(std::size_t i, const Prop& p) const {
        return eval_prop(p, [&](VarId v) {
            if (v >= kBoundBase) {
                auto it = env.find(v);
                if (it == env.end()) throw Error("unbound quantified variable");
                return static_cast<bool>(it->second[i]);
            }
            if (v >= w[i].size()) throw Error("valuation misses variable " + std::to_string(v));
            return static_cast<bool>(w[i][v]);
        });
    }

    unsigned long count(const Prop& p, std::size_t b, std::size_t e) const {
        unsigned long n = 0;
        for (std::size_t i = b; i <= e; ++i) n += point(i, p) ? 1 : 0;
        return n;
    }

    bool holds(std::size_t b, std::size_t e, const Formula& d) {
        using K = Formula::Kind;
        switch (d.kind) {
            case K::Point: return b == e && point(b, *d.prop);
            case K::Front: {
                if (b >= e) return false;
                for (std::size_t i = b; i < e; ++i)
                    if (!point(i, *d.prop)) return false;
                return true;
            }
            case K::All: {
                for (std::size_t i = b; i <= e; ++i)
                    if (!point(i, *d.prop)) return false;
                return true;
            }
            case K::Unit: return e == b + 1 && point(b, *d.prop);
            case K::Chop:
                for (std::size_t i = b; i <= e; ++i)
                    if (holds(b, i, *d.lhs) && holds(i, e, *d.rhs)) return true;
                return false;
            case K::Not: return !holds(b, e, *d.lhs);
            case K::And: return holds(b, e, *d.lhs) && holds(b, e, *d.rhs);
            case K::Or: return holds(b, e, *d.lhs) || holds(b, e, *d.rhs);
            case K::Ex:
            case K::AllQ: {
                // Only positions b..e are observable inside the interval, so
                // enumerating the variable there covers every p-variant.
                bool want = d.kind == K::Ex;
                std::size_t n = e - b + 1;
                if (n > 20) throw Error("evaluator: interval too long for quantifier enumeration");
                auto saved = env.find(d.var) != env.end() ? std::optional(env[d.var]) : std::nullopt;
                std::vector<bool> track(w.size(), false);
                bool result = !want;
                for (unsigned long m = 0; m < (1ul << n); ++m) {
                    for (std::size_t k = 0; k < n; ++k) track[b + k] = (m >> k) & 1;
                    env[d.var] = track;
                    if (holds(b, e, *d.lhs) == want) {
                        result = want;
                        break;
                    }
                }
                if (saved) env[d.var] = *saved; else env.erase(d.var);
                return result;
            }
            case K::Slen: return compare(e - b, d.cmp, d.constant);
            case K::Scount: return compare(count(*d.prop, b, e), d.cmp, d.constant);
            case K::Sdur: return compare(b == e ? 0 : count(*d.prop, b, e - 1), d.cmp, d.constant);
            case K::Univ: return true;
            case K::Pt: return b == e;
            case K::Ext: return b < e;
            case K::Diamond:
                for (std::size_t i = b; i <= e; ++i)
                    for (std::size_t j = i; j <= e; ++j)
                        if (holds(i, j, *d.lhs)) return true;
                return false;
            case K::Box:
                for (std::size_t i = b; i <= e; ++i)
                    for (std::size_t j = i; j <= e; ++j)
                        if (!holds(i, j, *d.lhs)) return false;
                return true;
            case K::Pref:
                for (std::size_t j = b; j <= e; ++j)
                    if (!holds(b, j, *d.lhs)) return false;
                return true;
            case K::EP: return point(e, *d.prop);
        }
        throw Error("eval_interval: unknown node");
    }
};

void check_interval(const Word& w, std::size_t b, std::size_t e) {
    if (w.empty()) throw Error("empty word");
    if (b > e || e >= w.size()) throw Error("invalid interval");
}

}  // namespace

bool eval_point(const Word& w, std::size_t i, const Prop& p) {
    if (i >= w.size()) throw Error("index out of range");
    return Evaluator{w, {}}.point(i, p);
}

bool eval_interval(const Word& w, std::size_t b, std::size_t e, const Formula& d) {
    check_interval(w, b, e);
    Evaluator ev{w, {}};
    return ev.holds(b, e, d);
}

bool satisfies(const Word& w, const Formula& d) {
    if (w.empty()) throw Error("empty word");
    return eval_interval(w, 0, w.size() - 1, d);
}

unsigned long scount(const Word& w, const Prop& p, std::size_t b, std::size_t e) {
    check_interval(w, b, e);
    return Evaluator{w, {}}.count(p, b, e);
}

unsigned long sdur(const Word& w, const Prop& p, std::size_t b, std::size_t e) {
    check_interval(w, b, e);
    return b == e ? 0 : Evaluator{w, {}}.count(p, b, e - 1);
}

}  // namespace qds
