#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qds/qddc/registry.hpp"

namespace qds {

// ---- propositional layer ----

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct Prop {
    enum class Kind { False, True, Var, Not, And, Or };
    Kind kind;
    VarId var = 0;
    PropPtr lhs, rhs;
};

PropPtr prop_false();
PropPtr prop_true();
PropPtr prop_var(VarId v);
PropPtr prop_not(PropPtr a);
PropPtr prop_and(PropPtr a, PropPtr b);
PropPtr prop_or(PropPtr a, PropPtr b);
PropPtr prop_implies(PropPtr a, PropPtr b);
PropPtr prop_iff(PropPtr a, PropPtr b);

// Evaluate under a total assignment given by a callback.
template <class Lookup>
bool eval_prop(const Prop& p, const Lookup& value) {
    switch (p.kind) {
        case Prop::Kind::False: return false;
        case Prop::Kind::True: return true;
        case Prop::Kind::Var: return value(p.var);
        case Prop::Kind::Not: return !eval_prop(*p.lhs, value);
        case Prop::Kind::And: return eval_prop(*p.lhs, value) && eval_prop(*p.rhs, value);
        case Prop::Kind::Or: return eval_prop(*p.lhs, value) || eval_prop(*p.rhs, value);
    }
    return false;
}

void collect_vars(const Prop& p, std::vector<VarId>& out);

// ---- interval layer ----

enum class Cmp { Lt, Le, Eq, Ge, Gt };

bool compare(unsigned long lhs, Cmp op, unsigned long rhs);
const char* cmp_symbol(Cmp op);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind {
        // core
        Point, Front, All, Unit, Chop, Not, And, Or, Ex, AllQ, Slen, Scount, Sdur, Univ,
        // derived
        Pt, Ext, Diamond, Box, Pref, EP,
    };
    Kind kind;
    PropPtr prop;            // Point, Front, All, Unit, Scount, Sdur, EP
    FormulaPtr lhs, rhs;     // sub-formulas
    VarId var = 0;           // Ex, AllQ: bound variable id (>= kBoundBase)
    std::string var_name;    // Ex, AllQ: source name, for printing
    Cmp cmp = Cmp::Eq;       // Slen, Scount, Sdur
    unsigned constant = 0;   // Slen, Scount, Sdur
};

namespace f {
FormulaPtr point(PropPtr p);
FormulaPtr front(PropPtr p);
FormulaPtr all(PropPtr p);
FormulaPtr unit(PropPtr p);
FormulaPtr chop(FormulaPtr a, FormulaPtr b);
FormulaPtr lnot(FormulaPtr a);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr ex(VarId v, std::string name, FormulaPtr body);
FormulaPtr allq(VarId v, std::string name, FormulaPtr body);
FormulaPtr slen(Cmp op, unsigned c);
FormulaPtr scount(PropPtr p, Cmp op, unsigned c);
FormulaPtr sdur(PropPtr p, Cmp op, unsigned c);
FormulaPtr univ();
FormulaPtr falsum();  // !UNIV
FormulaPtr pt();
FormulaPtr ext();
FormulaPtr diamond(FormulaPtr a);
FormulaPtr box(FormulaPtr a);
FormulaPtr pref(FormulaPtr a);
FormulaPtr ep(PropPtr p);
FormulaPtr conj(const std::vector<FormulaPtr>& parts);  // empty -> UNIV
}  // namespace f

bool is_derived(Formula::Kind k);

// Replace every derived construct by its core expansion.
FormulaPtr rewrite_derived(const FormulaPtr& d);

// Registered (free) variables read by a formula, sorted.
std::vector<VarId> free_vars(const Formula& d);

// Human readable form using registry names.
std::string to_string(const Prop& p, const VarRegistry& reg);
std::string to_string(const Formula& d, const VarRegistry& reg);

// Structural key using variable ids; equal keys mean equal formulas.
std::string structural_key(const Formula& d);

}  // namespace qds
