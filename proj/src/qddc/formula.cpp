#include "qds/qddc/formula.hpp"

#include <algorithm>
#include <map>

#include "qds/error.hpp"

namespace qds {

namespace {

PropPtr mk_prop(Prop::Kind k, VarId v = 0, PropPtr a = nullptr, PropPtr b = nullptr) {
    auto p = std::make_shared<Prop>();
    p->kind = k;
    p->var = v;
    p->lhs = std::move(a);
    p->rhs = std::move(b);
    return p;
}

std::shared_ptr<Formula> mk(Formula::Kind k) {
    auto d = std::make_shared<Formula>();
    d->kind = k;
    return d;
}

FormulaPtr with_prop(Formula::Kind k, PropPtr p) {
    auto d = mk(k);
    d->prop = std::move(p);
    return d;
}

FormulaPtr unary(Formula::Kind k, FormulaPtr a) {
    auto d = mk(k);
    d->lhs = std::move(a);
    return d;
}

FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
    auto d = mk(k);
    d->lhs = std::move(a);
    d->rhs = std::move(b);
    return d;
}

FormulaPtr counter(Formula::Kind k, PropPtr p, Cmp op, unsigned c) {
    auto d = mk(k);
    d->prop = std::move(p);
    d->cmp = op;
    d->constant = c;
    return d;
}

}  // namespace

PropPtr prop_false() { return mk_prop(Prop::Kind::False); }
PropPtr prop_true() { return mk_prop(Prop::Kind::True); }
PropPtr prop_var(VarId v) { return mk_prop(Prop::Kind::Var, v); }
PropPtr prop_not(PropPtr a) { return mk_prop(Prop::Kind::Not, 0, std::move(a)); }
PropPtr prop_and(PropPtr a, PropPtr b) { return mk_prop(Prop::Kind::And, 0, std::move(a), std::move(b)); }
PropPtr prop_or(PropPtr a, PropPtr b) { return mk_prop(Prop::Kind::Or, 0, std::move(a), std::move(b)); }
PropPtr prop_implies(PropPtr a, PropPtr b) { return prop_or(prop_not(std::move(a)), std::move(b)); }
PropPtr prop_iff(PropPtr a, PropPtr b) {
    return prop_or(prop_and(a, b), prop_and(prop_not(a), prop_not(b)));
}

void collect_vars(const Prop& p, std::vector<VarId>& out) {
    switch (p.kind) {
        case Prop::Kind::Var: out.push_back(p.var); break;
        case Prop::Kind::Not: collect_vars(*p.lhs, out); break;
        case Prop::Kind::And:
        case Prop::Kind::Or:
            collect_vars(*p.lhs, out);
            collect_vars(*p.rhs, out);
            break;
        default: break;
    }
}

bool compare(unsigned long lhs, Cmp op, unsigned long rhs) {
    switch (op) {
        case Cmp::Lt: return lhs < rhs;
        case Cmp::Le: return lhs <= rhs;
        case Cmp::Eq: return lhs == rhs;
        case Cmp::Ge: return lhs >= rhs;
        case Cmp::Gt: return lhs > rhs;
    }
    return false;
}

const char* cmp_symbol(Cmp op) {
    switch (op) {
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Eq: return "=";
        case Cmp::Ge: return ">=";
        case Cmp::Gt: return ">";
    }
    return "?";
}

namespace f {
using K = Formula::Kind;
FormulaPtr point(PropPtr p) { return with_prop(K::Point, std::move(p)); }
FormulaPtr front(PropPtr p) { return with_prop(K::Front, std::move(p)); }
FormulaPtr all(PropPtr p) { return with_prop(K::All, std::move(p)); }
FormulaPtr unit(PropPtr p) { return with_prop(K::Unit, std::move(p)); }
FormulaPtr chop(FormulaPtr a, FormulaPtr b) { return binary(K::Chop, std::move(a), std::move(b)); }
FormulaPtr lnot(FormulaPtr a) { return unary(K::Not, std::move(a)); }
FormulaPtr land(FormulaPtr a, FormulaPtr b) { return binary(K::And, std::move(a), std::move(b)); }
FormulaPtr lor(FormulaPtr a, FormulaPtr b) { return binary(K::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return lor(lnot(std::move(a)), std::move(b)); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return land(implies(a, b), implies(b, a)); }
FormulaPtr ex(VarId v, std::string name, FormulaPtr body) {
    auto d = mk(K::Ex);
    d->var = v;
    d->var_name = std::move(name);
    d->lhs = std::move(body);
    return d;
}
FormulaPtr allq(VarId v, std::string name, FormulaPtr body) {
    auto d = mk(K::AllQ);
    d->var = v;
    d->var_name = std::move(name);
    d->lhs = std::move(body);
    return d;
}
FormulaPtr slen(Cmp op, unsigned c) { return counter(K::Slen, nullptr, op, c); }
FormulaPtr scount(PropPtr p, Cmp op, unsigned c) { return counter(K::Scount, std::move(p), op, c); }
FormulaPtr sdur(PropPtr p, Cmp op, unsigned c) { return counter(K::Sdur, std::move(p), op, c); }
FormulaPtr univ() { return mk(K::Univ); }
FormulaPtr falsum() { return lnot(univ()); }
FormulaPtr pt() { return mk(K::Pt); }
FormulaPtr ext() { return mk(K::Ext); }
FormulaPtr diamond(FormulaPtr a) { return unary(K::Diamond, std::move(a)); }
FormulaPtr box(FormulaPtr a) { return unary(K::Box, std::move(a)); }
FormulaPtr pref(FormulaPtr a) { return unary(K::Pref, std::move(a)); }
FormulaPtr ep(PropPtr p) { return with_prop(K::EP, std::move(p)); }
FormulaPtr conj(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) return univ();
    FormulaPtr r = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) r = land(r, parts[i]);
    return r;
}
}  // namespace f

bool is_derived(Formula::Kind k) {
    using K = Formula::Kind;
    return k == K::Pt || k == K::Ext || k == K::Diamond || k == K::Box || k == K::Pref || k == K::EP;
}

FormulaPtr rewrite_derived(const FormulaPtr& d) {
    using K = Formula::Kind;
    switch (d->kind) {
        case K::Point: case K::Front: case K::All: case K::Unit:
        case K::Slen: case K::Scount: case K::Sdur: case K::Univ:
            return d;
        case K::Chop: case K::And: case K::Or: {
            auto a = rewrite_derived(d->lhs);
            auto b = rewrite_derived(d->rhs);
            if (a == d->lhs && b == d->rhs) return d;
            return binary(d->kind, a, b);
        }
        case K::Not: {
            auto a = rewrite_derived(d->lhs);
            return a == d->lhs ? d : f::lnot(a);
        }
        case K::Ex: case K::AllQ: {
            auto a = rewrite_derived(d->lhs);
            if (a == d->lhs) return d;
            return d->kind == K::Ex ? f::ex(d->var, d->var_name, a) : f::allq(d->var, d->var_name, a);
        }
        case K::Pt: return f::point(prop_true());
        case K::Ext: return f::lnot(f::point(prop_true()));
        case K::Diamond: return f::chop(f::chop(f::univ(), rewrite_derived(d->lhs)), f::univ());
        case K::Box:
            return f::lnot(f::chop(f::chop(f::univ(), f::lnot(rewrite_derived(d->lhs))), f::univ()));
        case K::Pref: return f::lnot(f::chop(f::lnot(rewrite_derived(d->lhs)), f::univ()));
        case K::EP: return f::chop(f::univ(), f::point(d->prop));
    }
    throw Error("rewrite_derived: unknown node");
}

namespace {

void free_vars_rec(const Formula& d, std::vector<VarId>& out) {
    if (d.prop) collect_vars(*d.prop, out);
    if (d.lhs) free_vars_rec(*d.lhs, out);
    if (d.rhs) free_vars_rec(*d.rhs, out);
}

struct Printer {
    const VarRegistry* reg;  // null: print ids
    std::map<VarId, std::string> bound;

    std::string var(VarId v) const {
        if (v >= kBoundBase) {
            auto it = bound.find(v);
            if (reg && it != bound.end()) return it->second;
            return "$" + std::to_string(v - kBoundBase);
        }
        return reg ? reg->name(v) : "#" + std::to_string(v);
    }

    std::string prop(const Prop& p) const {
        switch (p.kind) {
            case Prop::Kind::False: return "false";
            case Prop::Kind::True: return "true";
            case Prop::Kind::Var: return var(p.var);
            case Prop::Kind::Not: return "!" + prop(*p.lhs);
            case Prop::Kind::And: return "(" + prop(*p.lhs) + " && " + prop(*p.rhs) + ")";
            case Prop::Kind::Or: return "(" + prop(*p.lhs) + " || " + prop(*p.rhs) + ")";
        }
        return "?";
    }

    std::string formula(const Formula& d) {
        using K = Formula::Kind;
        auto cmp = [&](const std::string& term) {
            return "(" + term + " " + cmp_symbol(d.cmp) + " " + std::to_string(d.constant) + ")";
        };
        switch (d.kind) {
            case K::Point: return "<" + prop(*d.prop) + ">";
            case K::Front: return "[" + prop(*d.prop) + "]";
            case K::All: return "[[" + prop(*d.prop) + "]]";
            case K::Unit: return "{{" + prop(*d.prop) + "}}";
            case K::Chop: return "(" + formula(*d.lhs) + " ^ " + formula(*d.rhs) + ")";
            case K::Not: return "!" + formula(*d.lhs);
            case K::And: return "(" + formula(*d.lhs) + " && " + formula(*d.rhs) + ")";
            case K::Or: return "(" + formula(*d.lhs) + " || " + formula(*d.rhs) + ")";
            case K::Ex:
            case K::AllQ: {
                bound[d.var] = d.var_name;
                std::string body = formula(*d.lhs);
                bound.erase(d.var);
                std::string name = reg ? d.var_name : var(d.var);
                return std::string("(") + (d.kind == K::Ex ? "ex " : "all ") + name + ". " + body + ")";
            }
            case K::Slen: return cmp("slen");
            case K::Scount: return cmp("scount " + prop(*d.prop));
            case K::Sdur: return cmp("sdur " + prop(*d.prop));
            case K::Univ: return "true";
            case K::Pt: return "pt";
            case K::Ext: return "ext";
            case K::Diamond: return "<>" + formula(*d.lhs);
            case K::Box: return "[]" + formula(*d.lhs);
            case K::Pref: return "pref(" + formula(*d.lhs) + ")";
            case K::EP: return "EP(" + prop(*d.prop) + ")";
        }
        return "?";
    }
};

}  // namespace

std::vector<VarId> free_vars(const Formula& d) {
    std::vector<VarId> out;
    free_vars_rec(d, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove_if(out.begin(), out.end(), [](VarId v) { return v >= kBoundBase; }), out.end());
    return out;
}

std::string to_string(const Prop& p, const VarRegistry& reg) { return Printer{&reg, {}}.prop(p); }

std::string to_string(const Formula& d, const VarRegistry& reg) {
    Printer pr{&reg, {}};
    return pr.formula(d);
}

std::string structural_key(const Formula& d) {
    Printer pr{nullptr, {}};
    return pr.formula(d);
}

}  // namespace qds
