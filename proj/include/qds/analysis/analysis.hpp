#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qds/dfa/dfa.hpp"
#include "qds/qddc/formula.hpp"
#include "qds/qddc/registry.hpp"

namespace qds::analysis {

using dfa::Dfa;
using dfa::StateId;

// The unique legal output of a controller for one input valuation; output
// variables the controller leaves open are set false. Returns the full
// valuation (inputs copied from `in`) and the successor, or nothing when
// the state blocks on this input.
struct Move {
    Valuation letter;
    StateId next;
};

class Stepper {
public:
    Stepper(const Dfa& cnt, const VarRegistry& reg);
    std::optional<Move> move(StateId s, const Valuation& in) const;

private:
    const Dfa& cnt_;
    const VarRegistry& reg_;
    std::vector<bool> live_;  // some leaf below the node is not the reject sink
};

// One line per (state, input cube) of the controller:
//   state input_cube -> output_valuation next_state
// Cubes are over the inputs (0/1/-), valuations over outputs and witnesses.
void write_table(std::ostream& os, const Dfa& cnt, const VarRegistry& reg);

// ---- expected value ----

// Controller x monitor under uniform iid inputs.
struct Dtmc {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;  // sorted by target
    std::vector<bool> accepting;
    std::uint32_t initial = 0;

    std::size_t size() const { return rows.size(); }
};

Dtmc build_dtmc(const Dfa& cnt, const Dfa& monitor, const VarRegistry& reg);

struct Bscc {
    std::vector<std::uint32_t> states;
    std::vector<double> stationary;  // aligned with states
    double absorption = 0;           // probability of reaching it from the initial state
    double accepting_mass = 0;
};

struct SteadyState {
    std::vector<Bscc> bsccs;
    double value = 0;  // long-run fraction of time in accepting states
};

SteadyState steady_state(const Dtmc& m);

double expected_value(const Dfa& cnt, const FormulaPtr& c, const VarRegistry& reg);

// Mean accepting fraction over `runs` independent runs of `steps` steps.
double monte_carlo(const Dtmc& m, std::size_t runs, std::size_t steps, std::uint64_t seed);

// MRMC input files: .tra (STATES/TRANSITIONS header, 1-based "src dst p"
// lines) and .lab (accepting states labelled `accept`).
void write_mrmc(const Dtmc& m, std::ostream& tra, std::ostream& lab);
void export_mrmc(const Dfa& cnt, const FormulaPtr& c, const VarRegistry& reg, const std::string& basename);

// ---- must dominance ----

// Input words on which every output of S satisfies C; a DFA over the inputs.
Dfa must_inputs(const Dfa& s, const FormulaPtr& c, const VarRegistry& reg);

struct Dominance {
    bool holds = false;
    std::optional<Word> counterexample;  // input word in MustInp(S1) but not MustInp(S2)
};

// Whether S2 must-dominates S1 with respect to C.
Dominance check_dominance(const Dfa& s1, const Dfa& s2, const FormulaPtr& c, const VarRegistry& reg);

// ---- latency ----

struct MaxLen {
    bool infinite = false;
    bool unsatisfiable = false;  // no execution fragment satisfies D
    std::size_t value = 0;       // e - b of the longest satisfying fragment
};

MaxLen maxlen(const Dfa& m, const FormulaPtr& d, const VarRegistry& reg);

// ---- simulation ----

struct Trace {
    Word letters;               // full valuations, one per step
    std::vector<bool> monitor;  // acceptance of the attached monitor after each step
};

Trace simulate(const Dfa& cnt, const Word& inputs, const VarRegistry& reg, const Dfa* monitor = nullptr);

}  // namespace qds::analysis
