#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qds/qddc/parser.hpp"
#include "qds/synth/synth.hpp"

namespace qds::spec {

struct Binding {
    std::string name;
    FormulaPtr formula;
};

struct SoftEntry {
    FormulaPtr formula;  // or
    PropPtr prop;
    double weight = 1.0;
    bool weighted = false;  // weight given explicitly
};

// A parsed specification file. Formulas are fully expanded and refer to
// variables of `reg`.
struct Spec {
    std::string name;
    VarRegistry reg;
    Definitions defs;
    std::vector<Binding> indicators;  // indefinitions
    std::vector<std::string> useind;
    FormulaPtr hard;                  // hardreq, conjoined; may be null
    std::vector<SoftEntry> soft;      // softreq
    bool lexicographic = false;       // softreq lex { ... }
    FormulaPtr assume, commit;        // optional assume{} / commit{} blocks
};

Spec parse_qsf(const std::string& path);
Spec parse_qsf_text(std::string_view text);

// The hardreq/softreq blocks as written (type < 0), or one of the four
// derived specifications from assume/commit:
//   0: (C, true)   1: (A => C, true)   2: (true, C)   3: (A => C, C)
synth::SynthSpec derive(const Spec& s, int type);

// Hard requirement and, for expected-value analysis, the commitment.
FormulaPtr commitment(const Spec& s);

}  // namespace qds::spec
