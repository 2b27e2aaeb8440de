#include "qds/dfa/io.hpp"

#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "qds/error.hpp"

namespace qds::dfa {

namespace {

std::string join(const std::vector<std::string>& xs) {
    std::string r;
    for (std::size_t i = 0; i < xs.size(); ++i) r += (i ? "," : "") + xs[i];
    return r;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> r;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ','))
        if (!cur.empty()) r.push_back(cur);
    return r;
}

std::string label(const Cube& c, const VarRegistry& reg) {
    if (c.literals.empty()) return "true";
    std::string r;
    for (auto [v, b] : c.literals) r += (r.empty() ? "" : " ") + std::string(b ? "" : "!") + reg.name(v);
    return r;
}

}  // namespace

std::string cube_string(const std::vector<std::pair<VarId, bool>>& literals, std::size_t width) {
    std::string s(width, '-');
    for (auto [v, b] : literals)
        if (v < width) s[v] = b ? '1' : '0';
    return s;
}

void write_dot(std::ostream& os, const Dfa& a, const VarRegistry& reg, const std::string& name) {
    os << "digraph \"" << name << "\" {\n  rankdir=LR;\n  init [shape=point];\n";
    for (StateId s = 0; s < a.state_count(); ++s) {
        os << "  s" << s << " [shape=" << (a.accepting(s) ? "doublecircle" : "circle");
        if (a.is_sink(s)) os << ", style=dashed";
        os << "];\n";
    }
    os << "  init -> s" << a.initial() << ";\n";
    for (StateId s = 0; s < a.state_count(); ++s)
        for (const Cube& c : paths(a.diagram(), a.root(s)))
            os << "  s" << s << " -> s" << c.target << " [label=\"" << label(c, reg) << "\"];\n";
    os << "}\n";
}

void write_aut(std::ostream& os, const Dfa& a, const VarRegistry& reg) {
    std::vector<std::string> ins, outs, wits, vars;
    for (VarId v = 0; v < reg.size(); ++v) {
        switch (reg.kind(v)) {
            case VarKind::Input: ins.push_back(reg.name(v)); break;
            case VarKind::Output: outs.push_back(reg.name(v)); break;
            case VarKind::Witness: wits.push_back(reg.name(v)); break;
        }
    }
    for (VarId v : a.vars()) vars.push_back(reg.name(v));
    os << "INPUTS " << join(ins) << "\nOUTPUTS " << join(outs) << "\nWITNESSES " << join(wits) << "\nVARS "
       << join(vars) << "\n";
    std::vector<std::string> acc;
    for (StateId s = 0; s < a.state_count(); ++s)
        if (a.accepting(s)) acc.push_back(std::to_string(s));
    os << "STATES " << a.state_count() << " INIT " << a.initial() << " ACCEPTING " << join(acc) << "\n";
    for (StateId s = 0; s < a.state_count(); ++s)
        for (const Cube& c : paths(a.diagram(), a.root(s)))
            os << s << " " << cube_string(c.literals, reg.size()) << " " << c.target << "\n";
}

namespace {

Dfa parse_body(std::istream& is, const std::string& states_line, const std::vector<VarId>& vars, std::size_t width,
               int line_no) {
    std::istringstream hl(states_line);
    std::string kw;
    std::size_t n = 0;
    StateId init = 0;
    std::string acc_list;
    hl >> kw >> n;
    if (kw != "STATES" || n == 0) throw ParseError("expected 'STATES n'", line_no, 1);
    hl >> kw >> init;
    if (kw != "INIT" || init >= n) throw ParseError("expected 'INIT i' with i < n", line_no, 1);
    hl >> kw;
    if (kw != "ACCEPTING") throw ParseError("expected 'ACCEPTING'", line_no, 1);
    hl >> acc_list;
    std::vector<bool> acc(n, false);
    for (auto& x : split(acc_list)) {
        std::size_t s = std::stoul(x);
        if (s >= n) throw ParseError("accepting state out of range", line_no, 1);
        acc[s] = true;
    }

    Diagram dd;
    const StateId undef = static_cast<StateId>(n);
    NodeId undef_leaf = dd.leaf(undef);
    std::vector<NodeId> roots(n, undef_leaf);
    std::function<bool(NodeId)> all_undef = [&](NodeId x) -> bool {
        if (dd.is_leaf(x)) return dd.target(x) == undef;
        return all_undef(dd.lo(x)) && all_undef(dd.hi(x));
    };
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t src = 0, dst = 0;
        std::string cube;
        if (!(ls >> src >> cube >> dst)) throw ParseError("expected 'src cube dst'", line_no, 1);
        if (src >= n || dst >= n) throw ParseError("state out of range", line_no, 1);
        if (cube.size() != width) throw ParseError("cube width differs from registry size", line_no, 1);
        std::vector<std::pair<VarId, bool>> lits;
        for (std::size_t v = 0; v < width; ++v) {
            if (cube[v] == '-') continue;
            if (cube[v] != '0' && cube[v] != '1') throw ParseError("bad cube character", line_no, 1);
            lits.emplace_back(static_cast<VarId>(v), cube[v] == '1');
        }
        std::function<NodeId(NodeId, std::size_t)> ins = [&](NodeId x, std::size_t k) -> NodeId {
            if (k == lits.size()) {
                if (!all_undef(x)) throw ParseError("overlapping transitions", line_no, 1);
                return dd.leaf(static_cast<StateId>(dst));
            }
            VarId v = lits[k].first;
            if (!dd.is_leaf(x) && dd.var(x) < v) {
                NodeId lo = ins(dd.lo(x), k);
                NodeId hi = ins(dd.hi(x), k);
                return dd.node(dd.var(x), lo, hi);
            }
            NodeId lo = x, hi = x;
            if (!dd.is_leaf(x) && dd.var(x) == v) {
                lo = dd.lo(x);
                hi = dd.hi(x);
            }
            if (lits[k].second) hi = ins(hi, k + 1);
            else lo = ins(lo, k + 1);
            return dd.node(v, lo, hi);
        };
        roots[src] = ins(roots[src], 0);
    }
    std::function<bool(NodeId)> any_undef = [&](NodeId x) -> bool {
        if (dd.is_leaf(x)) return dd.target(x) == undef;
        return any_undef(dd.lo(x)) || any_undef(dd.hi(x));
    };
    for (std::size_t s = 0; s < n; ++s)
        if (any_undef(roots[s]))
            throw ParseError("state " + std::to_string(s) + " has undefined transitions", line_no, 1);
    // Drop the placeholder leaf by rebuilding.
    Diagram out;
    std::vector<NodeId> map(dd.size(), kNoNode);
    std::function<NodeId(NodeId)> copy = [&](NodeId x) -> NodeId {
        if (map[x] != kNoNode) return map[x];
        NodeId r = dd.is_leaf(x) ? out.leaf(dd.target(x)) : [&] {
            NodeId lo = copy(dd.lo(x));
            NodeId hi = copy(dd.hi(x));
            return out.node(dd.var(x), lo, hi);
        }();
        map[x] = r;
        return r;
    };
    std::vector<NodeId> final_roots;
    for (auto r : roots) final_roots.push_back(copy(r));
    return Dfa(vars, std::move(out), std::move(final_roots), std::move(acc), init);
}

struct Header {
    std::optional<std::vector<std::string>> inputs, outputs, witnesses, vars;
    std::string states_line;
    int line_no = 0;
};

Header read_header(std::istream& is) {
    Header h;
    std::string line;
    while (std::getline(is, line)) {
        ++h.line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw, rest;
        ls >> kw;
        std::getline(ls, rest);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        rest = trim(rest);
        if (kw == "INPUTS") h.inputs = split(rest);
        else if (kw == "OUTPUTS") h.outputs = split(rest);
        else if (kw == "WITNESSES") h.witnesses = split(rest);
        else if (kw == "VARS") h.vars = split(rest);
        else if (kw == "STATES") {
            h.states_line = line;
            return h;
        } else {
            throw ParseError("unexpected header line '" + kw + "'", h.line_no, 1);
        }
    }
    throw ParseError("missing STATES line", h.line_no, 1);
}

std::vector<VarId> resolve(const std::optional<std::vector<std::string>>& names, const VarRegistry& reg) {
    std::vector<VarId> vs;
    if (!names) {
        for (VarId v = 0; v < reg.size(); ++v) vs.push_back(v);
        return vs;
    }
    for (auto& n : *names) vs.push_back(reg.id(n));
    return vs;
}

}  // namespace

AutFile read_aut(std::istream& is) {
    Header h = read_header(is);
    if (!h.inputs || !h.outputs) throw ParseError("automaton file without INPUTS/OUTPUTS header", h.line_no, 1);
    VarRegistry reg(*h.inputs, *h.outputs);
    if (h.witnesses)
        for (auto& w : *h.witnesses) reg.add_witness(w);
    auto vars = resolve(h.vars, reg);
    Dfa d = parse_body(is, h.states_line, vars, reg.size(), h.line_no);
    return AutFile{std::move(reg), std::move(d)};
}

Dfa read_aut(std::istream& is, const VarRegistry& reg) {
    Header h = read_header(is);
    if (h.inputs) {
        VarRegistry file_reg(*h.inputs, h.outputs ? *h.outputs : std::vector<std::string>{});
        if (h.witnesses)
            for (auto& w : *h.witnesses) file_reg.add_witness(w);
        if (!(file_reg == reg)) throw Error("automaton file registry differs from the expected one");
    }
    return parse_body(is, h.states_line, resolve(h.vars, reg), reg.size(), h.line_no);
}

}  // namespace qds::dfa
