#include <doctest.h>

#include <cmath>
#include <functional>

#include "qds/compile/compiler.hpp"
#include "qds/dfa/explicit.hpp"
#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/qddc/parser.hpp"
#include "qds/spec/corpus.hpp"
#include "qds/spec/qsf.hpp"
#include "support.hpp"

using namespace qds;
using namespace qds::synth;

namespace {

// Explicit safety game over a table with every registry variable on the
// alphabet. Letter bit k is variable k.
struct Game {
    std::size_t ni, no;
    std::vector<std::vector<StateId>> next;  // next[s][letter]
    std::vector<bool> accepting;
    StateId initial;
};

Game explicit_game(const Dfa& a, const VarRegistry& reg) {
    Game g{reg.num_inputs(), reg.size() - reg.num_inputs(), {}, a.accepting_set(), a.initial()};
    const std::size_t letters = std::size_t{1} << reg.size();
    for (StateId s = 0; s < a.state_count(); ++s) {
        g.next.emplace_back();
        for (std::size_t l = 0; l < letters; ++l) {
            Valuation v(reg.size());
            for (std::size_t k = 0; k < reg.size(); ++k) v[k] = (l >> k) & 1;
            g.next.back().push_back(a.step(s, v));
        }
    }
    return g;
}

bool controllable(const Game& g, StateId s, const std::vector<bool>& x) {
    for (std::size_t i = 0; i < (std::size_t{1} << g.ni); ++i) {
        bool some = false;
        for (std::size_t o = 0; o < (std::size_t{1} << g.no) && !some; ++o) some = x[g.next[s][i | (o << g.ni)]];
        if (!some) return false;
    }
    return true;
}

std::vector<bool> safe_states(const Game& g) {
    std::vector<bool> w = g.accepting;
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId s = 0; s < w.size(); ++s)
            if (w[s] && !controllable(g, s, w)) {
                w[s] = false;
                changed = true;
            }
    }
    return w;
}

void check_mps_against_game(const Dfa& hard, const VarRegistry& reg, std::size_t max_len) {
    auto g = explicit_game(hard, reg);
    auto want = safe_states(g);
    auto got = mps(hard, reg);
    CHECK(got.winning == want);
    bool realizable = controllable(g, g.initial, want);
    REQUIRE(got.realizable == realizable);
    if (!realizable) return;
    CHECK(is_nonblocking(*got.supervisor, reg));
    test::for_each_word(test::iota_vars(reg.size()), reg.size(), max_len, [&](const Word& w) {
        StateId s = g.initial;
        bool ok = true;
        for (const auto& v : w) {
            s = hard.step(s, v);
            ok = ok && want[s];
        }
        REQUIRE(dfa::accepts(*got.supervisor, w) == ok);
    });
}

// Random hard automaton over one input and one output.
Dfa random_hard(std::mt19937_64& rng, std::size_t states) {
    return dfa::from_explicit(test::random_explicit(rng, {0, 1}, states, 0.7));
}

// Toy arena: states 0..n-1 accepting, n the reject sink; every state keeps
// at least one output per input.
WeightedArena toy_arena(std::mt19937_64& rng, std::size_t n, std::size_t ni, std::size_t no) {
    const std::size_t letters = std::size_t{1} << (ni + no);
    std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(n));
    std::vector<std::vector<StateId>> delta(n + 1, std::vector<StateId>(letters, static_cast<StateId>(n)));
    for (StateId s = 0; s < n; ++s)
        for (std::size_t l = 0; l < letters; ++l) delta[s][l] = pick(rng);
    for (StateId s = 0; s < n; ++s)
        for (std::size_t i = 0; i < (std::size_t{1} << ni); ++i)
            delta[s][i] = static_cast<StateId>(rng() % n);  // output all-false stays legal
    std::vector<bool> acc(n + 1, true);
    acc[n] = false;
    std::vector<VarId> vars = test::iota_vars(ni + no);
    WeightedArena a{dfa::from_explicit(dfa::ExplicitDfa(vars, delta, acc, 0)), {}};
    std::uniform_real_distribution<double> w(0.0, 2.0);
    for (std::size_t o = 0; o < no; ++o) a.terms.push_back({static_cast<VarId>(ni + o), rng() % 2 == 0, w(rng)});
    return a;
}

// Plain recursion over the game tree, no tabling.
double brute_value(const WeightedArena& a, const VarRegistry& reg, StateId s, unsigned p, double gamma) {
    if (p == 0) return 0;
    const std::size_t ni = reg.num_inputs(), no = reg.size() - ni;
    auto sink = a.automaton.reject_sink();
    double sum = 0;
    for (std::size_t i = 0; i < (std::size_t{1} << ni); ++i) {
        double best = -INFINITY;
        for (std::size_t o = 0; o < (std::size_t{1} << no); ++o) {
            Valuation v(reg.size());
            for (std::size_t k = 0; k < ni; ++k) v[k] = (i >> k) & 1;
            for (std::size_t k = 0; k < no; ++k) v[ni + k] = (o >> k) & 1;
            StateId t = a.automaton.step(s, v);
            if (sink && t == *sink) continue;
            double wt = 0;
            for (const auto& term : a.terms)
                if (v[term.var] == term.positive) wt += term.weight;
            best = std::max(best, wt + gamma * brute_value(a, reg, t, p - 1, gamma));
        }
        sum += best;
    }
    return sum / static_cast<double>(std::size_t{1} << ni);
}

VarRegistry toy_reg(std::size_t ni, std::size_t no) {
    std::vector<std::string> in, out;
    for (std::size_t k = 0; k < ni; ++k) in.push_back("i" + std::to_string(k));
    for (std::size_t k = 0; k < no; ++k) out.push_back("o" + std::to_string(k));
    return VarRegistry(in, out);
}

}  // namespace

TEST_CASE("cpre on a two-state game") {
    VarRegistry reg({"i"}, {"o"});
    // State 0: o must copy i to stay in 0; state 1 is the trap.
    auto a = dfa::from_explicit(dfa::ExplicitDfa({0, 1}, {{0, 1, 1, 0}, {1, 1, 1, 1}}, {true, false}, 0));
    CHECK(cpre(a, {true, false}, reg) == std::vector<bool>{true, false});
    CHECK(cpre(a, {false, false}, reg) == std::vector<bool>{false, false});
    // Both variables as inputs: nobody can keep o equal to i.
    VarRegistry env({"i", "o"}, {});
    CHECK(cpre(a, {true, false}, env) == std::vector<bool>{false, false});
}

TEST_CASE("safety fixpoint matches an explicit game on random automata") {
    VarRegistry reg({"i"}, {"o"});
    std::mt19937_64 rng(21);
    int realizable = 0;
    for (int k = 0; k < 60; ++k) {
        auto hard = prefix_closure(random_hard(rng, 2 + k % 6));
        check_mps_against_game(hard, reg, 4);
        realizable += mps(hard, reg).realizable;
    }
    CHECK(realizable > 5);
    CHECK(realizable < 55);
}

TEST_CASE("safety fixpoint matches an explicit game on small specifications") {
    VarRegistry reg({"p", "q"}, {"r"});
    for (const char* text : {"[]([[p]] ^ <q> => <r>)", "[](<p> => <!r>) && [](<q> => <r>)",
                             "[](slen = 1 => ([[p]] => [[r]]))", "[]((<r> ^ <r>) => false)",
                             "[](scount r <= 1 || slen > 3)", "[](<p> ^ true ^ <q> => true ^ <r>)"}) {
        CAPTURE(text);
        auto hard = prefix_closure(compile(parse_formula(text, reg), reg));
        check_mps_against_game(hard, reg, 4);
    }
}

TEST_CASE("safety fixpoint matches an explicit game on corpus automata") {
    struct Item {
        std::string text;
        int type;
    };
    int checked = 0;
    for (const auto& it : {Item{spec::corpus::minepump(8, 2, 6, 2), 0}, Item{spec::corpus::minepump(8, 2, 6, 2), 1},
                           Item{spec::corpus::minepump(8, 2, 10, 1), 1}, Item{spec::corpus::arbiter(5, 3, 2), 0},
                           Item{spec::corpus::arbiter(5, 3, 2), 1}, Item{spec::corpus::arb_hard(4, 4), -1},
                           Item{spec::corpus::arb_hard_assume(5, 3, 2), -1}, Item{spec::corpus::arb_soft(5, 3), -1},
                           Item{spec::corpus::arb_tok(5), -1}}) {
        auto s = spec::parse_qsf_text(it.text);
        auto hard = prefix_closure(compile(spec::derive(s, it.type).hard, s.reg));
        if (hard.state_count() > 200 || s.reg.size() > dfa::ExplicitDfa::kMaxVars) continue;
        ++checked;
        CAPTURE(s.name);
        CAPTURE(it.type);
        auto g = explicit_game(hard, s.reg);
        auto want = safe_states(g);
        auto got = mps(hard, s.reg);
        CHECK(got.winning == want);
        bool realizable = controllable(g, g.initial, want);
        REQUIRE(got.realizable == realizable);
        if (!realizable) continue;
        // Oracle supervisor: leave the winning region only into a sink.
        const StateId sink = static_cast<StateId>(g.next.size());
        auto delta = g.next;
        for (StateId q = 0; q < delta.size(); ++q)
            for (auto& t : delta[q]) t = (want[q] || q == g.initial) && want[t] ? t : sink;
        delta.emplace_back(delta[0].size(), sink);
        auto acc = want;
        acc.push_back(false);
        auto oracle = dfa::from_explicit(dfa::ExplicitDfa(test::iota_vars(s.reg.size()), delta, acc, g.initial));
        CHECK(dfa::language_equal(oracle, *got.supervisor));
    }
    CHECK(checked >= 5);
}

TEST_CASE("prefix closure keeps words whose prefixes all pass") {
    VarRegistry reg({"p", "q"}, {"r"});
    test::FormulaGen gen(31, reg.size());
    for (int k = 0; k < 60; ++k) {
        auto d = gen.formula(2);
        auto a = compile(d, reg);
        auto pc = prefix_closure(a);
        CHECK(dfa::identical(pc, compile(f::pref(d), reg)));
        test::for_each_word(test::iota_vars(reg.size()), reg.size(), 4, [&](const Word& w) {
            bool all = true;
            for (std::size_t n = 1; n <= w.size() && all; ++n) all = dfa::accepts(a, Word(w.begin(), w.begin() + n));
            REQUIRE(dfa::accepts(pc, w) == all);
        });
    }
}

TEST_CASE("value iteration matches brute-force recursion") {
    std::mt19937_64 rng(77);
    for (auto [ni, no] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 2}, {2, 1}}) {
        auto reg = toy_reg(ni, no);
        for (int k = 0; k < 8; ++k) {
            auto arena = toy_arena(rng, 3 + k % 3, ni, no);
            for (double gamma : {1.0, 0.7}) {
                const unsigned h = 5;
                auto vt = value_iterate(arena, h, gamma, reg);
                auto ve = value_iterate_enumerative(arena, h, gamma, reg);
                for (unsigned p = 0; p <= h; ++p)
                    for (StateId s = 0; s + 1 < arena.automaton.state_count(); ++s) {
                        double want = brute_value(arena, reg, s, p, gamma);
                        REQUIRE(vt.at(s, p) == doctest::Approx(want).epsilon(1e-12));
                        REQUIRE(ve.at(s, p) == doctest::Approx(want).epsilon(1e-12));
                    }
                CHECK(dfa::identical(mphos(arena, vt, reg), mphos_enumerative(arena, ve, reg)));
            }
        }
    }
}

TEST_CASE("the optimal strategy keeps exactly the argmax moves") {
    std::mt19937_64 rng(78);
    auto reg = toy_reg(1, 2);
    for (int k = 0; k < 10; ++k) {
        auto arena = toy_arena(rng, 4, 1, 2);
        const unsigned h = 4;
        auto vt = value_iterate(arena, h, 1.0, reg);
        auto m = mphos(arena, vt, reg);
        auto q = [&](StateId s, const Valuation& v) {
            double wt = 0;
            for (const auto& term : arena.terms)
                if (v[term.var] == term.positive) wt += term.weight;
            return wt + brute_value(arena, reg, arena.automaton.step(s, v), h - 1, 1.0);
        };
        auto sink = *arena.automaton.reject_sink();
        test::for_each_word(test::iota_vars(reg.size()), reg.size(), 3, [&](const Word& w) {
            StateId s = arena.automaton.initial();
            bool ok = true;
            for (const auto& v : w) {
                if (!ok) break;
                StateId t = arena.automaton.step(s, v);
                if (t == sink) {
                    ok = false;
                    break;
                }
                double best = -INFINITY;
                for (std::size_t o = 0; o < 4; ++o) {
                    Valuation x = v;
                    x[1] = o & 1;
                    x[2] = (o >> 1) & 1;
                    if (arena.automaton.step(s, x) != sink) best = std::max(best, q(s, x));
                }
                ok = q(s, v) >= best - 1e-9;
                s = t;
            }
            REQUIRE(dfa::accepts(m, w) == ok);
        });
    }
}

TEST_CASE("determinization follows the output ordering") {
    std::mt19937_64 rng(90);
    auto reg = toy_reg(1, 2);
    for (const char* ord_text : {"", "o0", "!o1,o0", "o1>!o0"}) {
        auto ord = parse_ordering(ord_text, reg);
        for (int k = 0; k < 8; ++k) {
            auto sup = toy_arena(rng, 4, 1, 2).automaton;
            auto det = determinize(sup, ord, reg);
            CHECK(is_deterministic(det, reg));
            CHECK(is_nonblocking(det, reg));
            CHECK(dfa::included(det, sup));
            test::for_each_word(test::iota_vars(reg.size()), reg.size(), 3, [&](const Word& w) {
                if (!dfa::accepts(det, w)) return;
                for (std::size_t o = 0; o < 4; ++o) {
                    Word alt = w;
                    alt.back()[1] = o & 1;
                    alt.back()[2] = (o >> 1) & 1;
                    if (dfa::accepts(sup, alt)) REQUIRE_FALSE(ranks_above(alt.back(), w.back(), ord, reg));
                }
            });
        }
    }
    CHECK_THROWS_AS(parse_ordering("i0", reg), Error);
    CHECK_THROWS_AS(parse_ordering("zz", reg), Error);
    CHECK(to_string(parse_ordering("o1 > !o0", reg), reg) == "o1,!o0");
}

TEST_CASE("pipeline refines at every stage") {
    for (auto text : {spec::corpus::minepump(8, 2, 6, 2), spec::corpus::arbiter(3, 2, 1)}) {
        auto s = spec::parse_qsf_text(text);
        for (int type : {1, 2, 3}) {
            CAPTURE(type);
            auto reg = s.reg;
            auto r = synthesize(spec::derive(s, type), reg, {});
            REQUIRE(r.realizable);
            CHECK(dfa::included(*r.mps, *r.hard));
            CHECK(dfa::included(*r.mphos, *r.mps));
            CHECK(dfa::included(*r.controller, *r.mphos));
            CHECK(is_nonblocking(*r.mps, reg));
            CHECK(is_nonblocking(*r.mphos, reg));
            CHECK(is_deterministic(*r.controller, reg));
            CHECK(r.controller->live_state_count() <= r.controller->state_count());
        }
    }
}

TEST_CASE("symbolic and enumerative pipelines agree on the mine pump") {
    auto s = spec::parse_qsf_text(spec::corpus::minepump(8, 2, 6, 2));
    auto reg1 = s.reg, reg2 = s.reg;
    SynthConfig fast, slow;
    slow.enumerative = true;
    auto a = synthesize(spec::derive(s, 3), reg1, fast);
    auto b = synthesize(spec::derive(s, 3), reg2, slow);
    CHECK(dfa::identical(*a.mphos, *b.mphos));
    CHECK(dfa::identical(*a.controller, *b.controller));
}

TEST_CASE("unrealizable and malformed inputs") {
    VarRegistry reg({"p"}, {"r"});
    SynthSpec bad;
    bad.hard = parse_formula("[](<p> => <r>) && [](<p> => <!r>)", reg);
    auto r = synthesize(bad, reg, {});
    CHECK_FALSE(r.realizable);
    CHECK_FALSE(r.controller.has_value());

    SynthSpec ok;
    ok.hard = parse_formula("[](<p> => <r>)", reg);
    SynthConfig cfg;
    cfg.gamma = 1.5;
    CHECK_THROWS_AS(synthesize(ok, reg, cfg), Error);
    cfg.gamma = 1.0;
    cfg.horizon = 0;
    CHECK_THROWS_AS(synthesize(ok, reg, cfg), Error);
    SynthSpec neg = ok;
    neg.soft.push_back({nullptr, parse_prop("r", reg), -1.0, ""});
    CHECK_THROWS_AS(synthesize(neg, reg, {}), Error);
}
