#include "qds/spec/qsf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qds/error.hpp"

namespace qds::spec {

namespace {

using K = Token::Kind;

class QsfParser {
public:
    explicit QsfParser(std::string_view text) : toks_(tokenize(text)) {}

    Spec parse() {
        Spec s;
        if (at(K::Hash)) {
            ++pos_;
            expect_ident("qsf");
            s.name = expect(K::String).text;
        }
        bool have_interface = false;
        while (!at(K::End)) {
            const Token& kw = expect(K::Ident);
            if (kw.text == "interface") {
                interface_block(s);
                have_interface = true;
                continue;
            }
            if (!have_interface) throw ParseError("the interface block must come first", kw.line, kw.column);
            if (kw.text == "definitions") definitions_block(s);
            else if (kw.text == "indefinitions") indefinitions_block(s);
            else if (kw.text == "hardreq") s.hard = conjoin(s.hard, formula_block(s));
            else if (kw.text == "assume") s.assume = conjoin(s.assume, formula_block(s));
            else if (kw.text == "commit") s.commit = conjoin(s.commit, formula_block(s));
            else if (kw.text == "softreq") softreq_block(s);
            else throw ParseError("unknown block '" + kw.text + "'", kw.line, kw.column);
        }
        if (!have_interface) throw ParseError("missing interface block", toks_.back().line, toks_.back().column);
        if (!s.hard && !s.commit)
            throw ParseError("specification has neither hardreq nor assume/commit", toks_.back().line, 1);
        for (const auto& u : s.useind) {
            bool bound = false;
            for (const auto& b : s.indicators) bound = bound || b.name == u;
            if (!bound) throw Error("useind '" + u + "' is not bound in indefinitions");
        }
        return s;
    }

private:
    bool at(K k) const { return toks_[pos_].kind == k; }
    const Token& peek() const { return toks_[pos_]; }

    const Token& expect(K k) {
        if (!at(k)) {
            const Token& t = peek();
            throw ParseError("unexpected '" + (t.kind == K::End ? std::string("end of file") : t.text) + "'", t.line,
                             t.column);
        }
        return toks_[pos_++];
    }

    void expect_ident(const std::string& word) {
        const Token& t = expect(K::Ident);
        if (t.text != word) throw ParseError("expected '" + word + "'", t.line, t.column);
    }

    static FormulaPtr conjoin(FormulaPtr a, FormulaPtr b) { return a ? f::land(a, b) : b; }

    // Tokens up to the matching close brace of a block whose '{' has been
    // consumed, split into top-level ';'-terminated statements.
    std::vector<std::vector<Token>> statements() {
        std::vector<std::vector<Token>> out;
        std::vector<Token> cur;
        int depth = 0;
        for (;;) {
            const Token& t = peek();
            if (t.kind == K::End) throw ParseError("unterminated block", t.line, t.column);
            if (t.kind == K::RBrace && depth == 0) {
                ++pos_;
                break;
            }
            if (t.kind == K::LParen || t.kind == K::LBrack || t.kind == K::LBrace) ++depth;
            if (t.kind == K::RParen || t.kind == K::RBrack || t.kind == K::RBrace) --depth;
            if (t.kind == K::Semi && depth == 0) {
                if (!cur.empty()) out.push_back(std::move(cur));
                cur.clear();
            } else {
                cur.push_back(t);
            }
            ++pos_;
        }
        if (!cur.empty()) out.push_back(std::move(cur));
        return out;
    }

    static std::vector<Token> terminated(std::vector<Token> ts, const Token& after) {
        Token end{K::End, "", 0, after.line, after.column};
        ts.push_back(end);
        return ts;
    }

    void interface_block(Spec& s) {
        expect(K::LBrace);
        std::vector<std::string> ins, outs;
        for (auto& st : statements()) {
            const Token& kw = st[0];
            if (kw.kind != K::Ident) throw ParseError("expected a declaration", kw.line, kw.column);
            if (kw.text == "input" || kw.text == "output") {
                auto& dst = kw.text == "input" ? ins : outs;
                for (std::size_t i = 1; i < st.size(); ++i) {
                    if (st[i].kind == K::Comma) continue;
                    if (st[i].kind != K::Ident) throw ParseError("expected a variable name", st[i].line, st[i].column);
                    // `monitor x` annotations are accepted and ignored.
                    if (st[i].text == "monitor") {
                        ++i;
                        continue;
                    }
                    dst.push_back(st[i].text);
                }
            } else if (kw.text == "constant") {
                std::size_t i = 1;
                while (i < st.size()) {
                    if (st[i].kind != K::Ident) throw ParseError("expected a constant name", st[i].line, st[i].column);
                    std::string name = st[i].text;
                    if (i + 1 >= st.size() || st[i + 1].kind != K::Eq)
                        throw ParseError("expected '=' after constant name", st[i].line, st[i].column);
                    std::size_t j = i + 2;
                    std::vector<Token> expr;
                    while (j < st.size() && st[j].kind != K::Comma) expr.push_back(st[j++]);
                    long v = parse_constant_expr(terminated(expr, st[i]), s.defs);
                    if (v < 0) throw ParseError("constants must be nonnegative", st[i].line, st[i].column);
                    s.defs.constants[name] = v;
                    i = j + 1;
                }
            } else {
                throw ParseError("unknown declaration '" + kw.text + "'", kw.line, kw.column);
            }
        }
        try {
            s.reg = VarRegistry(ins, outs);
        } catch (const Error& e) {
            throw Error(std::string("interface: ") + e.what());
        }
    }

    void definitions_block(Spec& s) {
        expect(K::LBrace);
        while (!at(K::RBrace)) {
            expect_ident("dc");
            const Token& name = expect(K::Ident);
            Macro m;
            expect(K::LParen);
            while (!at(K::RParen)) {
                m.params.push_back(expect(K::Ident).text);
                if (!at(K::RParen)) expect(K::Comma);
            }
            expect(K::RParen);
            expect(K::LBrace);
            auto body = statements();
            if (body.size() != 1) throw ParseError("macro body must hold one formula", name.line, name.column);
            m.body = std::move(body[0]);
            if (s.defs.macros.count(name.text)) throw ParseError("duplicate macro '" + name.text + "'", name.line, name.column);
            s.defs.macros[name.text] = std::move(m);
        }
        expect(K::RBrace);
    }

    void indefinitions_block(Spec& s) {
        expect(K::LBrace);
        for (auto& st : statements()) {
            if (st.size() < 3 || st[0].kind != K::Ident || st[1].kind != K::Colon)
                throw ParseError("expected 'name : formula'", st[0].line, st[0].column);
            auto v = s.reg.find(st[0].text);
            if (!v || s.reg.is_input(*v))
                throw ParseError("indicator '" + st[0].text + "' must be a declared output", st[0].line, st[0].column);
            std::vector<Token> rest(st.begin() + 2, st.end());
            s.indicators.push_back({st[0].text, parse_formula(terminated(rest, st.back()), s.reg, s.defs)});
        }
    }

    FormulaPtr formula_block(const Spec& s) {
        expect(K::LBrace);
        FormulaPtr r;
        for (auto& st : statements()) r = conjoin(r, parse_formula(terminated(st, st.back()), s.reg, s.defs));
        if (!r) throw ParseError("empty block", peek().line, peek().column);
        return r;
    }

    void softreq_block(Spec& s) {
        if (at(K::Ident) && peek().text == "lex") {
            ++pos_;
            s.lexicographic = true;
        }
        expect(K::LBrace);
        for (auto& st : statements()) {
            if (st[0].kind == K::Ident && st[0].text == "useind") {
                for (std::size_t i = 1; i < st.size(); ++i)
                    if (st[i].kind == K::Ident) s.useind.push_back(st[i].text);
                continue;
            }
            SoftEntry e;
            // Optional trailing ": weight".
            if (st.size() >= 2 && st[st.size() - 2].kind == K::Colon && st.back().kind == K::Int) {
                e.weight = static_cast<double>(st.back().value);
                e.weighted = true;
                st.resize(st.size() - 2);
            }
            auto ts = terminated(st, st.back());
            try {
                e.prop = parse_prop(ts, s.reg, s.defs);
            } catch (const ParseError&) {
                e.formula = parse_formula(ts, s.reg, s.defs);
            }
            s.soft.push_back(std::move(e));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Spec parse_qsf_text(std::string_view text) { return QsfParser(text).parse(); }

Spec parse_qsf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_qsf_text(ss.str());
}

synth::SynthSpec derive(const Spec& s, int type) {
    synth::SynthSpec r;
    if (type < 0) {
        if (!s.hard) throw Error("specification has no hardreq block");
        r.hard = s.hard;
        for (const auto& u : s.useind)
            for (const auto& b : s.indicators)
                if (b.name == u) r.bindings.push_back({s.reg.id(b.name), b.formula});
        const std::size_t k = s.soft.size();
        for (std::size_t i = 0; i < k; ++i) {
            const auto& e = s.soft[i];
            double w = s.lexicographic ? std::ldexp(1.0, static_cast<int>(k - i)) : e.weight;
            r.soft.push_back({e.formula, e.prop, w, ""});
        }
        return r;
    }
    if (type > 3) throw Error("type must be 0, 1, 2 or 3");
    if (!s.commit) throw Error("derived types need a commit block");
    if (type % 2 == 1 && !s.assume) throw Error("types 1 and 3 need an assume block");
    switch (type) {
        case 0: r.hard = s.commit; break;
        case 1: r.hard = f::implies(s.assume, s.commit); break;
        case 2: r.hard = f::univ(); break;
        case 3: r.hard = f::implies(s.assume, s.commit); break;
    }
    if (type >= 2) {
        // Reuse a declared indicator for the commitment when there is one.
        const std::string key = structural_key(*s.commit);
        for (const auto& b : s.indicators) {
            if (structural_key(*b.formula) != key) continue;
            VarId v = s.reg.id(b.name);
            r.bindings.push_back({v, b.formula});
            r.soft.push_back({nullptr, prop_var(v), 1.0, ""});
            return r;
        }
        r.soft.push_back({s.commit, nullptr, 1.0, ""});
    }
    return r;
}

FormulaPtr commitment(const Spec& s) {
    if (s.commit) return s.commit;
    if (s.indicators.size() == 1) return s.indicators[0].formula;
    throw Error("specification names no commitment");
}

}  // namespace qds::spec
