#include "qds/spec/corpus.hpp"

#include <vector>

#include "qds/error.hpp"

namespace qds::spec::corpus {

namespace {

std::string idx(const char* stem, unsigned i) { return stem + std::to_string(i); }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string r;
    for (std::size_t i = 0; i < xs.size(); ++i) r += (i ? sep : "") + xs[i];
    return r;
}

std::vector<std::string> names(const char* stem, unsigned n) {
    std::vector<std::string> r;
    for (unsigned i = 1; i <= n; ++i) r.push_back(idx(stem, i));
    return r;
}

// At most i of r1..rn hold: some subset S with |S| <= i covers every true
// request.
std::string atmost(unsigned n, unsigned i) {
    std::vector<std::string> terms;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<unsigned>(__builtin_popcount(mask)) > i) continue;
        std::vector<std::string> lits;
        for (unsigned j = 0; j < n; ++j)
            lits.push_back(((mask >> j) & 1) ? idx("r", j + 1) : "!" + idx("r", j + 1));
        terms.push_back("(" + join(lits, " && ") + ")");
    }
    return join(terms, " || ");
}

std::string arbiter_defs(unsigned n, unsigned i) {
    std::vector<std::string> mutex, spur, resp;
    for (unsigned a = 1; a <= n; ++a)
        for (unsigned b = a + 1; b <= n; ++b) mutex.push_back("!(" + idx("a", a) + " && " + idx("a", b) + ")");
    for (unsigned a = 1; a <= n; ++a) {
        spur.push_back("(" + idx("a", a) + " => " + idx("r", a) + ")");
        resp.push_back("resp(" + idx("r", a) + ", " + idx("a", a) + ")");
    }
    std::string s;
    s += "definitions {\n";
    s += "  dc mutex() { " + (mutex.empty() ? std::string("true") : "true^<" + join(mutex, " && ") + ">") + "; }\n";
    s += "  dc noloss() { true^<(" + join(names("r", n), " || ") + ") => (" + join(names("a", n), " || ") + ")>; }\n";
    s += "  dc nospurious() { true^<" + join(spur, " && ") + ">; }\n";
    s += "  dc arbinv() { mutex() && noloss() && nospurious(); }\n";
    s += "  dc resp(r, a) { true^([[r]] && slen = k-1) => true^(scount a >= 1 && slen = k-1); }\n";
    s += "  dc arbresp() { " + join(resp, " && ") + "; }\n";
    s += "  dc arbcommit() { arbinv() && arbresp(); }\n";
    if (i > 0) s += "  dc arbassume() { [[" + atmost(n, i) + "]]; }\n";
    s += "}\n";
    return s;
}

std::string arbiter_interface(const std::string& name, unsigned n, unsigned k, const std::string& extra_outputs = "") {
    std::string s = "#qsf \"" + name + "\"\n";
    s += "interface {\n";
    s += "  input " + join(names("r", n), ", ") + ";\n";
    s += "  output " + join(names("a", n), ", ") + extra_outputs + ";\n";
    s += "  constant k = " + std::to_string(k) + ";\n";
    s += "}\n";
    return s;
}

void check_n(unsigned n, unsigned k) {
    if (n == 0 || n > 12) throw Error("arbiter size must lie in 1..12");
    if (k == 0) throw Error("response bound must be positive");
}

}  // namespace

std::string minepump(unsigned w, unsigned epsilon, unsigned zeta, unsigned kappa) {
    std::string s = "#qsf \"minepump\"\n";
    s += "interface {\n";
    s += "  input HH2O, HCH4;\n";
    s += "  output PUMPON, ga;\n";
    s += "  constant w = " + std::to_string(w) + ", epsilon = " + std::to_string(epsilon) +
         ", zeta = " + std::to_string(zeta) + ", kappa = " + std::to_string(kappa) + ";\n";
    s += "}\n";
    s += R"(definitions {
  // methane release assumptions
  dc methane1(m) { []([m] ^ [!m] ^ <m> => slen > zeta); }
  dc methane2(m) { []([[m]] => slen < kappa); }
  // pump capacity assumption
  dc pumpcap1(h, p) { []!(slen = epsilon && ([[p && h]] ^ <h>)); }
  dc mineassume(h, m, p) { methane1(m) && methane2(m) && pumpcap1(h, p); }
  // safety conditions
  dc req1(h, m, p) { true ^ <(m || !h) => !p>; }
  dc req2(h) { !(true ^ ([[h]] && slen = w)); }
  dc minecommit(h, m, p) { req1(h, m, p) && req2(h); }
}
indefinitions { ga : minecommit(HH2O, HCH4, PUMPON); }
assume { mineassume(HH2O, HCH4, PUMPON); }
commit { minecommit(HH2O, HCH4, PUMPON); }
hardreq { mineassume(HH2O, HCH4, PUMPON) => minecommit(HH2O, HCH4, PUMPON); }
softreq {
  useind ga;
  (ga);
}
)";
    return s;
}

std::string arbiter(unsigned n, unsigned k, unsigned i) {
    check_n(n, k);
    if (i == 0 || i > n) throw Error("request bound must lie in 1..n");
    std::string s = arbiter_interface("arbiter", n, k, ", ga") + arbiter_defs(n, i);
    s += "indefinitions { ga : arbcommit(); }\n";
    s += "assume { arbassume(); }\n";
    s += "commit { arbcommit(); }\n";
    s += "hardreq { arbassume() => arbcommit(); }\n";
    s += "softreq {\n  useind ga;\n  (ga);\n}\n";
    return s;
}

std::string arb_hard(unsigned n, unsigned k) {
    check_n(n, k);
    std::string s = arbiter_interface("arbhard", n, k) + arbiter_defs(n, 0);
    s += "commit { arbcommit(); }\n";
    s += "hardreq { arbcommit(); }\n";
    return s;
}

std::string arb_soft(unsigned n, unsigned k) {
    check_n(n, k);
    std::string s = arbiter_interface("arbsoft", n, k) + arbiter_defs(n, 0);
    s += "hardreq { arbinv(); }\n";
    s += "softreq lex {\n";
    for (unsigned a = n; a >= 1; --a) s += "  resp(" + idx("r", a) + ", " + idx("a", a) + ");\n";
    s += "}\n";
    return s;
}

std::string arb_hard_assume(unsigned n, unsigned k, unsigned i) {
    check_n(n, k);
    if (i == 0 || i > n) throw Error("request bound must lie in 1..n");
    std::string s = arbiter_interface("arbhardassume", n, k) + arbiter_defs(n, i);
    s += "assume { arbassume(); }\n";
    s += "commit { arbcommit(); }\n";
    s += "hardreq { pref(arbassume()) => arbcommit(); }\n";
    s += "softreq { arbcommit(); }\n";
    return s;
}

std::string arb_tok(unsigned n) {
    check_n(n, 1);
    std::vector<std::string> init{"tok1"}, circ, resp;
    for (unsigned i = 2; i <= n; ++i) init.push_back("!" + idx("tok", i));
    for (unsigned i = 1; i <= n; ++i) {
        std::string t = idx("tok", i), u = idx("tok", i % n + 1);
        circ.push_back("(({{" + t + "}} ^ (slen = 1)) <=> ((slen = 1) ^ {{" + u + "}}))");
        resp.push_back("[[(" + idx("r", i) + " && " + t + ") => " + idx("a", i) + "]]");
    }
    std::string s = arbiter_interface("arbtok", n, 1, ", " + join(names("tok", n), ", ")) + arbiter_defs(n, 0);
    s += "hardreq {\n";
    s += "  arbinv();\n";
    s += "  <" + join(init, " && ") + "> ^ true;\n";
    s += "  [](" + join(circ, " && ") + ");\n";
    s += "  " + join(resp, " && ") + ";\n";
    s += "}\n";
    return s;
}

}  // namespace qds::spec::corpus
