#include "qds/qddc/parser.hpp"

#include <cctype>

#include "qds/error.hpp"

namespace qds {

using TK = Token::Kind;

std::vector<Token> tokenize(std::string_view s, int first_line) {
    std::vector<Token> out;
    int line = first_line, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto emit = [&](TK k, std::size_t len) {
        out.push_back(Token{k, std::string(s.substr(i, len)), 0, line, col});
        advance(len);
    };
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };

    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (starts("//")) {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (starts("/*")) {
            int l0 = line, c0 = col;
            advance(2);
            while (i < s.size() && !starts("*/")) advance(1);
            if (i >= s.size()) throw ParseError("unterminated comment", l0, c0);
            advance(2);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            emit(TK::Ident, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            Token t{TK::Int, std::string(s.substr(i, j - i)), 0, line, col};
            try {
                t.value = std::stol(t.text);
            } catch (const std::exception&) {
                throw ParseError("integer literal out of range", line, col);
            }
            out.push_back(t);
            advance(j - i);
            continue;
        }
        if (c == '"') {
            int l0 = line, c0 = col;
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') throw ParseError("unterminated string", l0, c0);
            out.push_back(Token{TK::String, std::string(s.substr(i + 1, j - i - 1)), 0, line, col});
            advance(j - i + 1);
            continue;
        }
        if (starts("<=>")) { emit(TK::Iff, 3); continue; }
        if (starts("<=")) { emit(TK::Le, 2); continue; }
        if (starts("<>")) { emit(TK::Diamond, 2); continue; }
        if (starts("=>")) { emit(TK::Implies, 2); continue; }
        if (starts(">=")) { emit(TK::Ge, 2); continue; }
        if (starts("==")) { emit(TK::Eq, 2); continue; }
        if (starts("&&")) { emit(TK::And, 2); continue; }
        if (starts("||")) { emit(TK::Or, 2); continue; }
        switch (c) {
            case '(': emit(TK::LParen, 1); continue;
            case ')': emit(TK::RParen, 1); continue;
            case '[': emit(TK::LBrack, 1); continue;
            case ']': emit(TK::RBrack, 1); continue;
            case '{': emit(TK::LBrace, 1); continue;
            case '}': emit(TK::RBrace, 1); continue;
            case ',': emit(TK::Comma, 1); continue;
            case ';': emit(TK::Semi, 1); continue;
            case '.': emit(TK::Dot, 1); continue;
            case ':': emit(TK::Colon, 1); continue;
            case '+': emit(TK::Plus, 1); continue;
            case '-': emit(TK::Minus, 1); continue;
            case '!': emit(TK::Not, 1); continue;
            case '^': emit(TK::Chop, 1); continue;
            case '<': emit(TK::Lt, 1); continue;
            case '>': emit(TK::Gt, 1); continue;
            case '=': emit(TK::Eq, 1); continue;
            case '#': emit(TK::Hash, 1); continue;
            default: throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back(Token{TK::End, "", 0, line, col});
    return out;
}

namespace {

constexpr int kMaxExpansionDepth = 64;

struct Shared {
    const VarRegistry& reg;
    const Definitions& defs;
    std::vector<std::pair<std::string, VarId>> scope;  // innermost last
    int fresh = 0;
};

class Parser {
public:
    Parser(const std::vector<Token>& toks, Shared& sh, int depth) : toks_(toks), sh_(sh), depth_(depth) {}

    FormulaPtr formula_to_end() {
        auto d = formula();
        expect_end();
        return d;
    }

    PropPtr prop_to_end() {
        auto p = prop();
        expect_end();
        return p;
    }

    long cexpr_to_end() {
        long v = cexpr();
        expect_end();
        return v;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(TK k) const { return peek().kind == k; }
    bool at_ident(std::string_view s) const { return at(TK::Ident) && peek().text == s; }
    const Token& take() {
        const Token& t = peek();
        if (pos_ < toks_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg, t.line, t.column);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
    const Token& expect(TK k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what + describe(peek()));
        return take();
    }
    void expect_end() {
        while (at(TK::Semi)) take();
        if (!at(TK::End)) fail("unexpected" + describe(peek()));
    }
    static std::string describe(const Token& t) {
        if (t.kind == TK::End) return " at end of input";
        return " near '" + t.text + "'";
    }

    // ---- constants ----
    long cexpr() {
        long v = cterm();
        while (at(TK::Plus) || at(TK::Minus)) {
            bool plus = take().kind == TK::Plus;
            long r = cterm();
            v = plus ? v + r : v - r;
        }
        return v;
    }
    long cterm() {
        if (at(TK::Int)) return take().value;
        if (at(TK::LParen)) {
            take();
            long v = cexpr();
            expect(TK::RParen, "')'");
            return v;
        }
        if (at(TK::Ident)) {
            const Token& t = take();
            auto it = sh_.defs.constants.find(t.text);
            if (it == sh_.defs.constants.end()) fail("unknown constant '" + t.text + "'", t);
            return it->second;
        }
        fail("expected integer constant" + describe(peek()));
    }
    unsigned nat_constant() {
        const Token& t = peek();
        long v = cexpr();
        if (v < 0) fail("negative constant " + std::to_string(v), t);
        return static_cast<unsigned>(v);
    }
    Cmp cmp_op() {
        switch (peek().kind) {
            case TK::Lt: take(); return Cmp::Lt;
            case TK::Le: take(); return Cmp::Le;
            case TK::Eq: take(); return Cmp::Eq;
            case TK::Ge: take(); return Cmp::Ge;
            case TK::Gt: take(); return Cmp::Gt;
            default: fail("expected comparison operator" + describe(peek()));
        }
    }

    // ---- propositional layer ----
    PropPtr prop() {
        auto a = prop_implies();
        while (at(TK::Iff)) {
            take();
            a = prop_iff(a, prop_implies());
        }
        return a;
    }
    PropPtr prop_implies() {
        auto a = prop_or();
        if (at(TK::Implies)) {
            take();
            return qds::prop_implies(a, prop_implies());
        }
        return a;
    }
    PropPtr prop_or() {
        auto a = prop_and();
        while (at(TK::Or)) {
            take();
            a = qds::prop_or(a, prop_and());
        }
        return a;
    }
    PropPtr prop_and() {
        auto a = prop_unary();
        while (at(TK::And)) {
            take();
            a = qds::prop_and(a, prop_unary());
        }
        return a;
    }
    PropPtr prop_unary() {
        if (at(TK::Not)) {
            take();
            return prop_not(prop_unary());
        }
        if (at(TK::LParen)) {
            take();
            auto p = prop();
            expect(TK::RParen, "')'");
            return p;
        }
        if (at(TK::Ident)) {
            const Token& t = take();
            if (t.text == "true") return prop_true();
            if (t.text == "false") return prop_false();
            return prop_var(lookup_var(t));
        }
        fail("expected propositional formula" + describe(peek()));
    }
    VarId lookup_var(const Token& t) const {
        for (auto it = sh_.scope.rbegin(); it != sh_.scope.rend(); ++it)
            if (it->first == t.text) return it->second;
        if (auto v = sh_.reg.find(t.text)) return *v;
        fail("unknown variable '" + t.text + "'", t);
    }

    // ---- interval layer ----
    FormulaPtr formula() {
        auto a = implies();
        while (at(TK::Iff)) {
            take();
            a = f::iff(a, implies());
        }
        return a;
    }
    FormulaPtr implies() {
        auto a = disj();
        if (at(TK::Implies)) {
            take();
            return f::implies(a, implies());
        }
        return a;
    }
    FormulaPtr disj() {
        auto a = conj();
        while (at(TK::Or)) {
            take();
            a = f::lor(a, conj());
        }
        return a;
    }
    FormulaPtr conj() {
        auto a = chop();
        while (at(TK::And)) {
            take();
            a = f::land(a, chop());
        }
        return a;
    }
    FormulaPtr chop() {
        auto a = unary();
        while (at(TK::Chop)) {
            take();
            a = f::chop(a, unary());
        }
        return a;
    }
    FormulaPtr unary() {
        if (at(TK::Not)) {
            take();
            return f::lnot(unary());
        }
        if (at(TK::Diamond)) {
            take();
            return f::diamond(unary());
        }
        if (at(TK::LBrack) && peek(1).kind == TK::RBrack) {
            take();
            take();
            return f::box(unary());
        }
        if ((at_ident("ex") || at_ident("all")) && peek(1).kind == TK::Ident && peek(2).kind == TK::Dot)
            return quantifier();
        return atom();
    }
    FormulaPtr quantifier() {
        bool exists = take().text == "ex";
        const Token& name = take();
        take();  // '.'
        for (auto& [n, _] : sh_.scope)
            if (n == name.text) fail("quantifier re-binds '" + name.text + "' already bound in scope", name);
        VarId v = kBoundBase + static_cast<VarId>(sh_.scope.size());
        sh_.scope.emplace_back(name.text, v);
        auto body = formula();
        sh_.scope.pop_back();
        return exists ? f::ex(v, name.text, body) : f::allq(v, name.text, body);
    }
    FormulaPtr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TK::Lt: {
                take();
                auto p = prop();
                expect(TK::Gt, "'>'");
                return f::point(p);
            }
            case TK::LBrack: {
                take();
                if (at(TK::LBrack)) {
                    take();
                    auto p = prop();
                    expect(TK::RBrack, "']]'");
                    expect(TK::RBrack, "']]'");
                    return f::all(p);
                }
                auto p = prop();
                expect(TK::RBrack, "']'");
                return f::front(p);
            }
            case TK::LBrace: {
                take();
                expect(TK::LBrace, "'{{'");
                auto p = prop();
                expect(TK::RBrace, "'}}'");
                expect(TK::RBrace, "'}}'");
                return f::unit(p);
            }
            case TK::LParen: {
                take();
                auto d = formula();
                expect(TK::RParen, "')'");
                return d;
            }
            case TK::Ident: return keyword_or_macro();
            default: fail("expected formula" + describe(t));
        }
    }
    FormulaPtr keyword_or_macro() {
        const Token& t = take();
        const std::string& w = t.text;
        if (w == "true") return f::univ();
        if (w == "false") return f::falsum();
        if (w == "pt") return f::pt();
        if (w == "ext") return f::ext();
        if (w == "slen") {
            Cmp op = cmp_op();
            return f::slen(op, nat_constant());
        }
        if (w == "scount" || w == "sdur") {
            auto p = prop_unary();
            Cmp op = cmp_op();
            unsigned c = nat_constant();
            return w == "scount" ? f::scount(p, op, c) : f::sdur(p, op, c);
        }
        if (w == "pref" && at(TK::LParen)) {
            take();
            auto d = formula();
            expect(TK::RParen, "')'");
            return f::pref(d);
        }
        if (w == "EP" && at(TK::LParen)) {
            take();
            auto p = prop();
            expect(TK::RParen, "')'");
            return f::ep(p);
        }
        auto m = sh_.defs.macros.find(w);
        if (m != sh_.defs.macros.end()) return expand(t, m->second);
        if (at(TK::LParen)) fail("undefined macro '" + w + "'", t);
        if (sh_.reg.find(w)) fail("variable '" + w + "' used as a formula; write <" + w + "> or [[" + w + "]]", t);
        fail("unknown identifier '" + w + "'", t);
    }

    FormulaPtr expand(const Token& call, const Macro& m) {
        if (depth_ >= kMaxExpansionDepth) fail("macro expansion too deep (recursive definition?)", call);
        std::vector<std::vector<Token>> args;
        if (at(TK::LParen)) {
            take();
            if (!at(TK::RParen)) {
                args.emplace_back();
                int nest = 0;
                while (true) {
                    const Token& a = peek();
                    if (a.kind == TK::End) fail("unterminated macro call", call);
                    if (nest == 0 && a.kind == TK::RParen) break;
                    if (nest == 0 && a.kind == TK::Comma) {
                        take();
                        args.emplace_back();
                        continue;
                    }
                    if (a.kind == TK::LParen || a.kind == TK::LBrack || a.kind == TK::LBrace) ++nest;
                    if (a.kind == TK::RParen || a.kind == TK::RBrack || a.kind == TK::RBrace) --nest;
                    args.back().push_back(take());
                }
            }
            expect(TK::RParen, "')'");
        }
        if (args.size() != m.params.size())
            fail("macro '" + call.text + "' expects " + std::to_string(m.params.size()) + " argument(s), got " +
                     std::to_string(args.size()),
                 call);
        for (auto& a : args)
            if (a.empty()) fail("empty macro argument", call);

        // Binders introduced by the body get fresh names so that argument text
        // cannot be captured.
        std::vector<Token> body = m.body;
        for (std::size_t i = 0; i + 2 < body.size(); ++i) {
            if (body[i].kind == TK::Ident && (body[i].text == "ex" || body[i].text == "all") &&
                body[i + 1].kind == TK::Ident && body[i + 2].kind == TK::Dot) {
                std::string old = body[i + 1].text;
                std::string fresh = old + "'" + std::to_string(++sh_.fresh);
                for (std::size_t j = i + 1; j < body.size(); ++j)
                    if (body[j].kind == TK::Ident && body[j].text == old) body[j].text = fresh;
            }
        }
        std::vector<Token> out;
        out.push_back(Token{TK::LParen, "(", 0, call.line, call.column});
        for (auto& bt : body) {
            std::size_t k = m.params.size();
            if (bt.kind == TK::Ident)
                for (k = 0; k < m.params.size() && m.params[k] != bt.text; ++k) {}
            if (k == m.params.size()) {
                out.push_back(bt);
                continue;
            }
            const auto& a = args[k];
            if (a.size() == 1) {
                out.push_back(a[0]);
            } else {
                out.push_back(Token{TK::LParen, "(", 0, a[0].line, a[0].column});
                out.insert(out.end(), a.begin(), a.end());
                out.push_back(Token{TK::RParen, ")", 0, a.back().line, a.back().column});
            }
        }
        while (!out.empty() && out.back().kind == TK::Semi) out.pop_back();
        out.push_back(Token{TK::RParen, ")", 0, call.line, call.column});
        out.push_back(Token{TK::End, "", 0, call.line, call.column});
        Parser sub(out, sh_, depth_ + 1);
        return sub.formula_to_end();
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    Shared& sh_;
    int depth_;
};

const Definitions& no_defs() {
    static const Definitions d;
    return d;
}

}  // namespace

FormulaPtr parse_formula(std::string_view text, const VarRegistry& reg) {
    return parse_formula(text, reg, no_defs());
}

FormulaPtr parse_formula(std::string_view text, const VarRegistry& reg, const Definitions& defs) {
    return parse_formula(tokenize(text), reg, defs);
}

FormulaPtr parse_formula(const std::vector<Token>& tokens, const VarRegistry& reg, const Definitions& defs) {
    Shared sh{reg, defs, {}, 0};
    return Parser(tokens, sh, 0).formula_to_end();
}

PropPtr parse_prop(std::string_view text, const VarRegistry& reg) {
    return parse_prop(tokenize(text), reg, no_defs());
}

PropPtr parse_prop(const std::vector<Token>& tokens, const VarRegistry& reg, const Definitions& defs) {
    Shared sh{reg, defs, {}, 0};
    return Parser(tokens, sh, 0).prop_to_end();
}

long parse_constant_expr(const std::vector<Token>& tokens, const Definitions& defs) {
    static const VarRegistry empty;
    Shared sh{empty, defs, {}, 0};
    return Parser(tokens, sh, 0).cexpr_to_end();
}

}  // namespace qds
