#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qds/dfa/dfa.hpp"
#include "qds/qddc/formula.hpp"
#include "qds/qddc/registry.hpp"

namespace qds::synth {

using dfa::Dfa;
using dfa::StateId;

// ---- safety game ----

// States from which every input admits an output leading into X.
std::vector<bool> cpre(const Dfa& a, const std::vector<bool>& x, const VarRegistry& reg);

struct MpsResult {
    bool realizable = false;
    std::vector<bool> winning;      // over the states of the hard automaton
    std::optional<Dfa> supervisor;  // minimal, with a reject sink when one is live
};
MpsResult mps(const Dfa& hard, const VarRegistry& reg);

// Words all of whose nonempty prefixes are accepted by a; minimal.
Dfa prefix_closure(const Dfa& a);

// Adds a reject sink if the automaton has none; returns its id.
std::pair<Dfa, StateId> with_sink(const Dfa& a);

// Every non-sink state offers a legal output for every input.
bool is_nonblocking(const Dfa& s, const VarRegistry& reg);
// Every non-sink state offers exactly one legal output valuation (over all
// registry outputs and witnesses) for every input.
bool is_deterministic(const Dfa& s, const VarRegistry& reg);

// ---- weighted arena ----

struct SoftReq {
    FormulaPtr formula;    // QDDC soft requirement, or
    PropPtr prop;          // propositional one, e.g. (ga)
    double weight = 1.0;
    std::string witness;   // name for the indicator variable; generated if empty
};

struct IndicatorBinding {
    VarId var;
    FormulaPtr formula;
};

struct WeightTerm {
    VarId var;
    bool positive;
    double weight;
};

struct WeightedArena {
    Dfa automaton;
    std::vector<WeightTerm> terms;  // wt(label) = sum of weights of satisfied literals

    double weight_of(const Valuation& v) const;
};

// Product of the supervisor with indicator monitors. Bindings constrain
// declared variables; soft entries that are single output literals become
// weight terms directly, all others get a fresh witness variable.
WeightedArena build_arena(const Dfa& sup, const std::vector<IndicatorBinding>& bindings,
                          const std::vector<SoftReq>& soft, VarRegistry& reg);

// ---- value iteration ----

struct ValueTable {
    unsigned horizon = 0;
    double gamma = 1.0;
    std::vector<std::vector<double>> val;  // val[p][s], p = 0..horizon

    double at(StateId s, unsigned p) const { return val[p][s]; }
};

inline constexpr double kTieTolerance = 1e-9;

ValueTable value_iterate(const WeightedArena& arena, unsigned horizon, double gamma, const VarRegistry& reg);
Dfa mphos(const WeightedArena& arena, const ValueTable& vals, const VarRegistry& reg);

// Per-(state, input, output) enumeration; usable when the registry is small.
ValueTable value_iterate_enumerative(const WeightedArena& arena, unsigned horizon, double gamma,
                                     const VarRegistry& reg);
Dfa mphos_enumerative(const WeightedArena& arena, const ValueTable& vals, const VarRegistry& reg);

// ---- determinization ----

struct Literal {
    VarId var;
    bool positive;
};
using OutputOrdering = std::vector<Literal>;

// "a1,!a2" or "a1>!a2".
OutputOrdering parse_ordering(const std::string& text, const VarRegistry& reg);
std::string to_string(const OutputOrdering& ord, const VarRegistry& reg);

// True when valuation x ranks above y under ord (restricted to non-inputs).
bool ranks_above(const Valuation& x, const Valuation& y, const OutputOrdering& ord, const VarRegistry& reg);

Dfa determinize(const Dfa& sup, const OutputOrdering& ord, const VarRegistry& reg);

// ---- pipeline ----

struct SynthSpec {
    FormulaPtr hard;
    std::vector<IndicatorBinding> bindings;
    std::vector<SoftReq> soft;
};

struct SynthConfig {
    unsigned horizon = 50;
    double gamma = 1.0;
    OutputOrdering ord;
    bool enumerative = false;  // use the enumerative value iteration
};

struct StageTimes {
    double compile_ms = 0, mps_ms = 0, arena_ms = 0, values_ms = 0, mphos_ms = 0, determinize_ms = 0;
};

struct SynthResult {
    bool realizable = false;
    std::optional<Dfa> hard;  // prefix closure of the hard requirement's automaton
    std::optional<Dfa> mps;
    std::optional<WeightedArena> arena;
    std::optional<ValueTable> values;
    std::optional<Dfa> mphos;
    std::optional<Dfa> controller;
    StageTimes times;
};

SynthResult synthesize(const SynthSpec& spec, VarRegistry& reg, const SynthConfig& cfg);

}  // namespace qds::synth
