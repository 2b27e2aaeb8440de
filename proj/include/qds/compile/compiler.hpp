#pragma once

#include <string>
#include <unordered_map>

#include "qds/dfa/dfa.hpp"
#include "qds/qddc/formula.hpp"
#include "qds/qddc/registry.hpp"

namespace qds {

struct CountKind {
    enum class Kind { Slen, Scount, Sdur };
    Kind kind;
    PropPtr prop;  // Scount, Sdur
};

// Formula to minimal DFA. Results for structurally equal sub-formulas are
// shared through a per-instance cache.
class Compiler {
public:
    explicit Compiler(const VarRegistry& reg) : reg_(reg) {}

    dfa::Dfa compile(const FormulaPtr& d);

    std::size_t cache_size() const { return cache_.size(); }
    // Called with every intermediate result; used by tests to check eager
    // minimization.
    void set_observer(void (*fn)(const dfa::Dfa&)) { observer_ = fn; }

private:
    dfa::Dfa compile_core(const Formula& d);

    const VarRegistry& reg_;
    std::unordered_map<std::string, dfa::Dfa> cache_;
    void (*observer_)(const dfa::Dfa&) = nullptr;
};

dfa::Dfa compile(const FormulaPtr& d, const VarRegistry& reg);

// Counter automaton for `term op c`; counts saturate at c+1.
dfa::Dfa count_automaton(const CountKind& kind, Cmp op, unsigned c, const VarRegistry& reg);

// Monitor over vars(D) and w in which w must equal, at every step, whether
// the word read so far satisfies D. All live states accept.
dfa::Dfa indicator(const dfa::Dfa& ad, VarId w);
dfa::Dfa indicator(const FormulaPtr& d, VarId w, const VarRegistry& reg);

}  // namespace qds
