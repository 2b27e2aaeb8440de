#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qds/analysis/analysis.hpp"
#include "qds/compile/compiler.hpp"
#include "qds/dfa/explicit.hpp"
#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/qddc/parser.hpp"
#include "qds/spec/corpus.hpp"
#include "qds/spec/qsf.hpp"
#include "support.hpp"

using namespace qds;
using namespace qds::analysis;

namespace {

struct Built {
    VarRegistry reg;
    Dfa controller;
    FormulaPtr commit;
};

Built minepump_controller(int type) {
    auto s = spec::parse_qsf_text(spec::corpus::minepump(8, 2, 6, 2));
    auto reg = s.reg;
    auto r = synth::synthesize(spec::derive(s, type), reg, {});
    REQUIRE(r.realizable);
    return {reg, *r.controller, spec::commitment(s)};
}

Built copy_controller() {
    VarRegistry reg({"p"}, {"r"});
    synth::SynthSpec sp;
    sp.hard = parse_formula("[](<p> <=> <r>)", reg);
    auto r = synth::synthesize(sp, reg, {});
    REQUIRE(r.realizable);
    return {reg, *r.controller, parse_formula("true ^ <r>", reg)};
}

// Random chain; every state has one to three successors.
Dtmc random_chain(std::mt19937_64& rng, std::size_t n) {
    Dtmc m;
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (std::size_t s = 0; s < n; ++s) {
        std::map<std::uint32_t, double> row;
        double total = 0;
        for (int k = 0, fan = 1 + static_cast<int>(rng() % 3); k < fan; ++k) {
            double p = u(rng);
            row[pick(rng)] += p;
            total += p;
        }
        m.rows.emplace_back();
        for (auto [t, p] : row) m.rows.back().push_back({t, p / total});
        m.accepting.push_back(rng() % 2 == 0);
    }
    return m;
}

// Cesaro average of the accepting mass along the transient distribution.
double cesaro(const Dtmc& m, std::size_t steps) {
    std::vector<double> x(m.size(), 0.0), y(m.size());
    x[m.initial] = 1.0;
    double acc = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t s = 0; s < m.size(); ++s)
            for (auto [t, p] : m.rows[s]) y[t] += x[s] * p;
        x.swap(y);
        for (std::size_t s = 0; s < m.size(); ++s)
            if (m.accepting[s]) acc += x[s];
    }
    return acc / static_cast<double>(steps);
}

}  // namespace

TEST_CASE("steady state matches the Cesaro limit on random chains") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 40; ++k) {
        auto m = random_chain(rng, 2 + k % 9);
        auto ss = steady_state(m);
        CHECK(std::abs(ss.value - cesaro(m, 1000000)) <= 1e-4);
        double absorbed = 0;
        for (const auto& b : ss.bsccs) {
            absorbed += b.absorption;
            double total = 0;
            for (double p : b.stationary) total += p;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            // pi P = pi on the component.
            for (std::size_t j = 0; j < b.states.size(); ++j) {
                double in = 0;
                for (std::size_t i = 0; i < b.states.size(); ++i)
                    for (auto [t, p] : m.rows[b.states[i]])
                        if (t == b.states[j]) in += b.stationary[i] * p;
                CHECK(std::abs(in - b.stationary[j]) <= 1e-10);
            }
        }
        CHECK(absorbed == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("controller chains are stochastic and agree with simulation") {
    for (int type : {2, 3}) {
        auto b = minepump_controller(type);
        auto m = build_dtmc(b.controller, compile(b.commit, b.reg), b.reg);
        for (const auto& row : m.rows) {
            double total = 0;
            for (auto [t, p] : row) total += p;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
        double exact = steady_state(m).value;
        double mc = monte_carlo(m, 1, 1000000, 2024);
        CHECK(std::abs(exact - mc) <= 0.01);
        CHECK(exact == doctest::Approx(expected_value(b.controller, b.commit, b.reg)));
    }
}

TEST_CASE("a copying controller always satisfies its commitment") {
    auto b = copy_controller();
    CHECK(expected_value(b.controller, b.commit, b.reg) == doctest::Approx(0.5));
    CHECK(expected_value(b.controller, parse_formula("true ^ <p <=> r>", b.reg), b.reg) == doctest::Approx(1.0));
}

TEST_CASE("MRMC export of a two-state chain") {
    Dtmc m;
    m.rows = {{{0, 0.25}, {1, 0.75}}, {{0, 1.0}}};
    m.accepting = {false, true};
    m.initial = 1;
    std::ostringstream tra, lab;
    write_mrmc(m, tra, lab);
    CHECK(tra.str() == "STATES 2\nTRANSITIONS 3\n1 2 1\n2 1 0.75\n2 2 0.25\n");
    CHECK(lab.str() == "#DECLARATION\naccept\n#END\n1 accept\n");
}

TEST_CASE("must inputs match brute force") {
    VarRegistry reg({"p"}, {"r"});
    std::mt19937_64 rng(44);
    for (const char* c_text : {"true ^ <p => r>", "[](<p> => <r>)", "scount r <= 2", "true ^ [[p]] ^ <r>"}) {
        auto c = parse_formula(c_text, reg);
        for (int k = 0; k < 6; ++k) {
            auto s = dfa::from_explicit(test::random_explicit(rng, {0, 1}, 4, 0.8));
            auto must = must_inputs(s, c, reg);
            test::for_each_word({0}, reg.size(), 4, [&](const Word& u) {
                bool all = true;
                for (unsigned long o = 0; o < (1ul << u.size()) && all; ++o) {
                    Word w = u;
                    for (std::size_t i = 0; i < w.size(); ++i) w[i][1] = (o >> i) & 1;
                    if (dfa::accepts(s, w)) all = satisfies(w, *c);
                }
                REQUIRE(dfa::accepts(must, u) == all);
            });
        }
    }
}

TEST_CASE("must dominance is reflexive and explains failures") {
    VarRegistry reg({"p"}, {"r"});
    std::mt19937_64 rng(45);
    auto c = parse_formula("true ^ <p => r>", reg);
    for (int k = 0; k < 10; ++k) {
        auto s1 = dfa::from_explicit(test::random_explicit(rng, {0, 1}, 3, 0.8));
        auto s2 = dfa::from_explicit(test::random_explicit(rng, {0, 1}, 3, 0.8));
        CHECK(check_dominance(s1, s1, c, reg).holds);
        auto d = check_dominance(s1, s2, c, reg);
        if (!d.holds) {
            REQUIRE(d.counterexample.has_value());
            CHECK(dfa::accepts(must_inputs(s1, c, reg), *d.counterexample));
            CHECK_FALSE(dfa::accepts(must_inputs(s2, c, reg), *d.counterexample));
        } else {
            CHECK(dfa::included(must_inputs(s1, c, reg), must_inputs(s2, c, reg)));
        }
    }
}

TEST_CASE("maxlen matches brute force on bounded runs") {
    VarRegistry reg({"p"}, {});
    std::mt19937_64 rng(46);
    int finite = 0;
    for (const char* d_text : {"[[p]]", "<p> ^ [[!p]] ^ <p>", "scount p = 2", "[[!p]] && slen >= 1"}) {
        auto d = parse_formula(d_text, reg);
        for (int k = 0; k < 12; ++k) {
            // States 0..2 live, 3 the reject sink.
            std::vector<std::vector<dfa::StateId>> delta(4);
            for (int s = 0; s < 3; ++s) delta[s] = {static_cast<dfa::StateId>(rng() % 4), static_cast<dfa::StateId>(rng() % 4)};
            delta[3] = {3, 3};
            auto m = dfa::from_explicit(dfa::ExplicitDfa({0}, delta, {true, true, true, false}, 0));
            auto got = maxlen(m, d, reg);
            long best = -1;
            test::for_each_word({0}, reg.size(), 9, [&](const Word& w) {
                StateId s = m.initial();
                for (const auto& v : w)
                    if ((s = m.step(s, v)) == 3) return;
                for (std::size_t b = 0; b < w.size(); ++b)
                    for (std::size_t e = b; e < w.size(); ++e)
                        if (satisfies(Word(w.begin() + b, w.begin() + e + 1), *d)) best = std::max(best, long(e - b));
            });
            CAPTURE(d_text);
            if (got.infinite) {
                CHECK(best >= 5);
            } else if (got.unsatisfiable) {
                CHECK(best == -1);
            } else {
                ++finite;
                CHECK(best == static_cast<long>(got.value));
            }
        }
    }
    CHECK(finite > 5);
}

TEST_CASE("simulation produces the controller's outputs") {
    auto b = copy_controller();
    Word in;
    for (bool p : {true, false, true, true}) in.push_back(Valuation{p, false});
    auto mon = compile(b.commit, b.reg);
    auto t = simulate(b.controller, in, b.reg, &mon);
    REQUIRE(t.letters.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(t.letters[i][1] == in[i][0]);
    CHECK(t.monitor == std::vector<bool>{true, false, true, true});
    CHECK(simulate(b.controller, {}, b.reg).letters.empty());

    std::ostringstream os;
    write_table(os, b.controller, b.reg);
    CHECK(os.str().find("->") != std::string::npos);
}

TEST_CASE("blocking controllers are reported") {
    VarRegistry reg({"p"}, {"r"});
    auto s = dfa::from_explicit(dfa::ExplicitDfa({0, 1}, {{0, 1, 1, 1}, {1, 1, 1, 1}}, {true, false}, 0));
    Word in{Valuation{true, false}};
    CHECK_THROWS_AS(simulate(s, in, reg), Error);
    CHECK_THROWS_AS(build_dtmc(s, Dfa::universal({}), reg), Error);
}
