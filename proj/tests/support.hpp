#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qds/dfa/explicit.hpp"
#include "qds/qddc/eval.hpp"
#include "qds/qddc/formula.hpp"
#include "qds/qddc/registry.hpp"

namespace qds::test {

// Every word of length 1..max_len over the given variables; other
// registry variables stay false.
inline void for_each_word(const std::vector<VarId>& vars, std::size_t width, std::size_t max_len,
                          const std::function<void(const Word&)>& fn) {
    const std::size_t letters = std::size_t{1} << vars.size();
    Word w;
    std::function<void()> rec = [&] {
        if (!w.empty()) fn(w);
        if (w.size() == max_len) return;
        for (std::size_t l = 0; l < letters; ++l) {
            Valuation v(width, false);
            for (std::size_t k = 0; k < vars.size(); ++k) v[vars[k]] = (l >> k) & 1;
            w.push_back(std::move(v));
            rec();
            w.pop_back();
        }
    };
    rec();
}

inline std::vector<VarId> iota_vars(std::size_t n) {
    std::vector<VarId> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<VarId>(i);
    return r;
}

// Random formulas over variables 0..nvars-1 with bounded depth.
class FormulaGen {
public:
    FormulaGen(std::uint64_t seed, std::size_t nvars) : rng_(seed), nvars_(nvars) {}

    PropPtr prop(int depth) {
        int c = pick(depth <= 0 ? 3 : 6);
        switch (c) {
            case 0: return prop_true();
            case 1:
            case 2: return prop_var(static_cast<VarId>(pick(static_cast<int>(nvars_))));
            case 3: return prop_not(prop(depth - 1));
            case 4: return prop_and(prop(depth - 1), prop(depth - 1));
            default: return prop_or(prop(depth - 1), prop(depth - 1));
        }
    }

    FormulaPtr formula(int depth) {
        if (depth <= 0) {
            switch (pick(6)) {
                case 0: return f::point(prop(1));
                case 1: return f::front(prop(1));
                case 2: return f::all(prop(1));
                case 3: return f::slen(cmp(), static_cast<unsigned>(pick(3)));
                case 4: return f::scount(prop(1), cmp(), static_cast<unsigned>(pick(3)));
                default: return f::sdur(prop(1), cmp(), static_cast<unsigned>(pick(3)));
            }
        }
        switch (pick(10)) {
            case 0: return f::chop(formula(depth - 1), formula(depth - 1));
            case 1: return f::lnot(formula(depth - 1));
            case 2: return f::land(formula(depth - 1), formula(depth - 1));
            case 3: return f::lor(formula(depth - 1), formula(depth - 1));
            case 4: return f::diamond(formula(depth - 1));
            case 5: return f::box(formula(depth - 1));
            case 6: return f::pref(formula(depth - 1));
            case 7: return f::unit(prop(1));
            case 8: {
                VarId b = kBoundBase + static_cast<VarId>(bound_++);
                auto body = f::chop(f::all(prop_or(prop_var(b), prop(0))), f::point(prop_var(b)));
                return pick(2) ? f::ex(b, "q" + std::to_string(b - kBoundBase), f::land(body, formula(depth - 1)))
                               : f::allq(b, "q" + std::to_string(b - kBoundBase), f::lor(f::lnot(body), formula(depth - 1)));
            }
            default: return formula(0);
        }
    }

    std::mt19937_64& rng() { return rng_; }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

private:
    Cmp cmp() { return static_cast<Cmp>(pick(5)); }

    std::mt19937_64 rng_;
    std::size_t nvars_;
    int bound_ = 0;
};

// Random total explicit DFA over `vars`.
inline dfa::ExplicitDfa random_explicit(std::mt19937_64& rng, std::vector<VarId> vars, std::size_t states,
                                        double accept_p = 0.5) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(states - 1));
    std::bernoulli_distribution acc(accept_p);
    std::vector<std::vector<dfa::StateId>> delta(states, std::vector<dfa::StateId>(std::size_t{1} << vars.size()));
    std::vector<bool> accepting(states);
    for (std::size_t s = 0; s < states; ++s) {
        for (auto& t : delta[s]) t = pick(rng);
        accepting[s] = acc(rng);
    }
    return dfa::ExplicitDfa(std::move(vars), std::move(delta), std::move(accepting), 0);
}

}  // namespace qds::test
