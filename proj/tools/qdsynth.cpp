#include <CLI11.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qds/analysis/analysis.hpp"
#include "qds/compile/compiler.hpp"
#include "qds/dfa/io.hpp"
#include "qds/dfa/ops.hpp"
#include "qds/error.hpp"
#include "qds/spec/corpus.hpp"
#include "qds/spec/qsf.hpp"

namespace {

using namespace qds;
using dfa::Dfa;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnrealizable = 2;

std::string ms(double v) { return fmt::format("{:.3g} ms", v); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Output stream for `path`, or stdout for "" and "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw Error("cannot write '" + path + "'");
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct Loaded {
    VarRegistry reg;
    Dfa dfa;
};

Loaded load_aut(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    auto f = dfa::read_aut(in);
    return {std::move(f.reg), std::move(f.dfa)};
}

// Macros and constants of a spec file, for formulas given on the command
// line. The spec's interface must agree with the automaton's.
Definitions load_defs(const std::string& spec_path, const VarRegistry& reg) {
    if (spec_path.empty()) return {};
    auto s = spec::parse_qsf(spec_path);
    for (VarId v = 0; v < s.reg.size(); ++v)
        if (v >= reg.size() || reg.name(v) != s.reg.name(v) || reg.kind(v) != s.reg.kind(v))
            throw Error("interface of '" + spec_path + "' does not match the automaton");
    return s.defs;
}

// A formula given inline or as the path of a file holding one.
FormulaPtr formula_arg(const std::string& text, const VarRegistry& reg, const Definitions& defs) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(text, ec)) return parse_formula(slurp(text), reg, defs);
    return parse_formula(text, reg, defs);
}

void write_automaton(const Dfa& a, const VarRegistry& reg, const std::string& format, const std::string& path) {
    Sink out(path);
    if (format == "aut") dfa::write_aut(out.os(), a, reg);
    else if (format == "dot") dfa::write_dot(out.os(), a, reg);
    else if (format == "table") analysis::write_table(out.os(), a, reg);
    else throw Error("unknown export format '" + format + "'");
}

std::string word_rows(const Word& w, const VarRegistry& reg, bool inputs_only) {
    const std::size_t n = inputs_only ? reg.num_inputs() : reg.size();
    std::string r;
    for (std::size_t v = 0; v < n; ++v) r += (v ? "," : "") + reg.name(static_cast<VarId>(v));
    r += "\n";
    for (const auto& letter : w) {
        for (std::size_t v = 0; v < n; ++v) r += std::string(v ? "," : "") + (letter[v] ? "1" : "0");
        r += "\n";
    }
    return r;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> r;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) {
        auto b = cur.find_first_not_of(" \t\r");
        auto e = cur.find_last_not_of(" \t\r");
        r.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return r;
}

// Input trace: header of input names, rows of 0/1. Unlisted inputs are 0.
Word read_trace(const std::string& path, const VarRegistry& reg) {
    std::istringstream in(slurp(path));
    std::string line;
    if (!std::getline(in, line)) throw Error("empty trace file '" + path + "'");
    std::vector<VarId> cols;
    for (const auto& name : split_csv(line)) {
        auto v = reg.find(name);
        if (!v || !reg.is_input(*v)) throw Error("trace column '" + name + "' is not an input");
        cols.push_back(*v);
    }
    Word w;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv(line);
        if (cells.size() != cols.size()) throw Error(fmt::format("{}:{}: expected {} values", path, row, cols.size()));
        Valuation v(reg.size(), false);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cells[i] != "0" && cells[i] != "1") throw Error(fmt::format("{}:{}: values must be 0 or 1", path, row));
            v[cols[i]] = cells[i] == "1";
        }
        w.push_back(std::move(v));
    }
    if (w.empty()) throw Error("trace '" + path + "' has no rows");
    return w;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("qdsynth");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* lv = std::getenv("QDSYNTH_LOG")) spdlog::set_level(spdlog::level::from_str(lv));
}

// ---- subcommands ----

struct SynthArgs {
    std::string spec;
    int type = -1;
    unsigned horizon = 50;
    double gamma = 1.0;
    std::string ord;
    std::string format;
    std::string out;
    std::string stage = "controller";
    bool oracle = false;
    bool enumerative = false;
    bool no_times = false;
    bool expected = false;
};

void oracle_checks(const synth::SynthResult& r, const synth::SynthConfig& cfg, const VarRegistry& reg) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw Error("oracle check failed: " + what);
        spdlog::info("oracle: {}", what);
    };
    require(synth::is_nonblocking(*r.mps, reg), "MPS is non-blocking");
    require(synth::is_nonblocking(*r.mphos, reg), "MPHOS is non-blocking");
    require(synth::is_deterministic(*r.controller, reg), "controller is deterministic");
    require(dfa::included(*r.mps, *r.hard), "L(MPS) within L(hard)");
    require(dfa::included(*r.mphos, *r.mps), "L(MPHOS) within L(MPS)");
    require(dfa::included(*r.controller, *r.mphos), "L(controller) within L(MPHOS)");
    if (reg.size() <= 20) {
        auto vals = synth::value_iterate_enumerative(*r.arena, cfg.horizon, cfg.gamma, reg);
        double diff = 0;
        for (std::size_t p = 0; p < vals.val.size(); ++p)
            for (std::size_t s = 0; s < vals.val[p].size(); ++s) {
                double a = vals.val[p][s], b = r.values->val[p][s];
                if (std::isinf(a) || std::isinf(b)) diff = std::max(diff, a == b ? 0.0 : HUGE_VAL);
                else diff = std::max(diff, std::abs(a - b));
            }
        require(diff <= 1e-9, "symbolic and enumerative values agree");
        require(dfa::language_equal(synth::mphos_enumerative(*r.arena, vals, reg), *r.mphos),
                "symbolic and enumerative MPHOS agree");
    } else {
        spdlog::warn("oracle: {} variables, enumerative cross-check skipped", reg.size());
    }
}

int cmd_synth(const SynthArgs& a) {
    auto s = spec::parse_qsf(a.spec);
    auto sp = spec::derive(s, a.type);
    synth::SynthConfig cfg;
    cfg.horizon = a.horizon;
    cfg.gamma = a.gamma;
    cfg.enumerative = a.enumerative;
    if (!a.ord.empty()) cfg.ord = synth::parse_ordering(a.ord, s.reg);
    spdlog::info("synthesizing '{}' with {} inputs, {} outputs", s.name, s.reg.num_inputs(), s.reg.num_outputs());
    auto r = synth::synthesize(sp, s.reg, cfg);

    auto line = [&](const std::string& what, std::size_t states, const std::string& time) {
        std::cout << fmt::format("{:<12}{:>8} states", what, states);
        if (!a.no_times) std::cout << "   " << time;
        std::cout << "\n";
    };
    std::cout << fmt::format("spec {}  type {}  H {}  gamma {}  ord {}\n", s.name.empty() ? a.spec : s.name,
                             a.type < 0 ? std::string("as written") : std::to_string(a.type), cfg.horizon, cfg.gamma,
                             cfg.ord.empty() ? std::string("default") : synth::to_string(cfg.ord, s.reg));
    line("hard", r.hard->state_count(), ms(r.times.compile_ms));
    if (!r.realizable) {
        std::cout << "Unrealizable\n";
        return kExitUnrealizable;
    }
    line("MPS", r.mps->state_count(), ms(r.times.mps_ms));
    line("MPHOS", r.mphos->state_count(),
         fmt::format("arena {}, values {}, pruning {}", ms(r.times.arena_ms), ms(r.times.values_ms),
                     ms(r.times.mphos_ms)));
    line("controller", r.controller->state_count(), ms(r.times.determinize_ms));
    if (a.expected) {
        if (s.commit)
            std::cout << fmt::format("E[commit] {:.7f}\n", analysis::expected_value(*r.controller, s.commit, s.reg));
        for (const auto& b : s.indicators) {
            auto ep = f::ep(prop_var(s.reg.id(b.name)));
            std::cout << fmt::format("E[{}] {:.7f}\n", b.name, analysis::expected_value(*r.controller, ep, s.reg));
        }
    }
    if (a.oracle) {
        oracle_checks(r, cfg, s.reg);
        std::cout << "oracle checks passed\n";
    }
    if (!a.format.empty()) {
        const Dfa* art = a.stage == "mps" ? &*r.mps : a.stage == "mphos" ? &*r.mphos : &*r.controller;
        if (a.format == "mrmc") {
            if (!s.commit) throw Error("mrmc export needs a commit block");
            analysis::export_mrmc(*art, s.commit, s.reg, a.out.empty() ? std::string("controller") : a.out);
        } else {
            write_automaton(*art, s.reg, a.format, a.out);
        }
    }
    return kExitOk;
}

int cmd_compile(const std::string& path, int type, const std::string& text, const std::string& format,
                const std::string& out) {
    auto s = spec::parse_qsf(path);
    FormulaPtr d = !text.empty() ? formula_arg(text, s.reg, s.defs) : spec::derive(s, type).hard;
    if (!d) d = f::univ();
    auto a = compile(d, s.reg);
    auto closed = synth::prefix_closure(a);
    std::cout << fmt::format("automaton {} states\nprefix closure {} states\n", a.state_count(), closed.state_count());
    if (!format.empty()) write_automaton(a, s.reg, format, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"QDDC controller synthesis with hard and soft requirements"};
    app.set_config("--config", "", "read options from a TOML/INI file");
    app.require_subcommand(1);

    // compile
    std::string c_spec, c_formula, c_format, c_out;
    int c_type = -1;
    auto* compile_cmd = app.add_subcommand("compile", "compile the hard requirement (or --formula) to a minimal DFA");
    compile_cmd->add_option("spec", c_spec, "QSF specification")->required()->check(CLI::ExistingFile);
    compile_cmd->add_option("--type", c_type, "derived specification type")->check(CLI::Range(0, 3));
    compile_cmd->add_option("--formula", c_formula, "formula text or file, parsed against the spec");
    compile_cmd->add_option("--export", c_format, "dot | aut | table")->check(CLI::IsMember({"dot", "aut", "table"}));
    compile_cmd->add_option("--out", c_out, "export destination (default stdout)");

    // synth
    SynthArgs sa;
    auto* synth_cmd = app.add_subcommand("synth", "synthesize MPS, MPHOS and a controller");
    synth_cmd->add_option("spec", sa.spec, "QSF specification")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--type", sa.type, "derived type 0..3; omit to use hardreq/softreq as written")
        ->check(CLI::Range(0, 3));
    synth_cmd->add_option("--H", sa.horizon, "horizon")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--gamma", sa.gamma, "discount factor in (0,1]")->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--ord", sa.ord, "output ordering, e.g. a1,!a2");
    synth_cmd->add_option("--export", sa.format, "dot | aut | table | mrmc")
        ->check(CLI::IsMember({"dot", "aut", "table", "mrmc"}));
    synth_cmd->add_option("--stage", sa.stage, "artifact to export")->check(CLI::IsMember({"mps", "mphos", "controller"}));
    synth_cmd->add_option("--out", sa.out, "export destination (basename for mrmc)");
    synth_cmd->add_flag("--oracle", sa.oracle, "cross-check against brute-force oracles");
    synth_cmd->add_flag("--enumerative", sa.enumerative, "use the enumerative value iteration");
    synth_cmd->add_flag("--no-times", sa.no_times, "omit timings (byte-identical reports)");
    synth_cmd->add_flag("--expected", sa.expected, "report expected values of the commitment and indicators");

    // determinize
    std::string d_aut, d_ord, d_format = "aut", d_out;
    auto* det_cmd = app.add_subcommand("determinize", "determinize a supervisor by output ordering");
    det_cmd->add_option("supervisor", d_aut, "automaton file")->required()->check(CLI::ExistingFile);
    det_cmd->add_option("--ord", d_ord, "output ordering");
    det_cmd->add_option("--export", d_format, "dot | aut | table")->check(CLI::IsMember({"dot", "aut", "table"}));
    det_cmd->add_option("--out", d_out, "destination (default stdout)");

    // simulate
    std::string s_aut, s_trace, s_monitor, s_spec, s_out;
    auto* sim_cmd = app.add_subcommand("simulate", "run a controller on an input trace");
    sim_cmd->add_option("controller", s_aut, "automaton file")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("trace", s_trace, "CSV input trace")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("--monitor", s_monitor, "formula whose acceptance is reported per step");
    sim_cmd->add_option("--spec", s_spec, "spec file providing macros");
    sim_cmd->add_option("--out", s_out, "CSV destination (default stdout)");

    // expected
    std::string e_aut, e_commit, e_spec;
    std::size_t e_steps = 0;
    std::uint64_t e_seed = 1;
    auto* exp_cmd = app.add_subcommand("expected", "long-run probability of a commitment under uniform inputs");
    exp_cmd->add_option("controller", e_aut, "automaton file")->required()->check(CLI::ExistingFile);
    exp_cmd->add_option("--commit", e_commit, "formula or file")->required();
    exp_cmd->add_option("--spec", e_spec, "spec file providing macros");
    exp_cmd->add_option("--mc-steps", e_steps, "also estimate by Monte Carlo with this many steps");
    exp_cmd->add_option("--seed", e_seed, "Monte Carlo seed");

    // dominance
    std::string m_s1, m_s2, m_commit, m_spec;
    auto* dom_cmd = app.add_subcommand("dominance", "check whether S2 must-dominates S1");
    dom_cmd->add_option("s1", m_s1, "automaton file")->required()->check(CLI::ExistingFile);
    dom_cmd->add_option("s2", m_s2, "automaton file")->required()->check(CLI::ExistingFile);
    dom_cmd->add_option("--commit", m_commit, "formula or file")->required();
    dom_cmd->add_option("--spec", m_spec, "spec file providing macros");

    // maxlen
    std::string l_aut, l_pattern, l_assume, l_spec;
    auto* len_cmd = app.add_subcommand("maxlen", "longest fragment satisfying a pattern");
    len_cmd->add_option("machine", l_aut, "automaton file")->required()->check(CLI::ExistingFile);
    len_cmd->add_option("--pattern", l_pattern, "formula or file")->required();
    len_cmd->add_option("--assume", l_assume, "restrict to runs whose every prefix satisfies this formula");
    len_cmd->add_option("--spec", l_spec, "spec file providing macros");

    // export
    std::string x_aut, x_format, x_commit, x_spec, x_out;
    auto* exp2_cmd = app.add_subcommand("export", "convert an automaton file");
    exp2_cmd->add_option("automaton", x_aut, "automaton file")->required()->check(CLI::ExistingFile);
    exp2_cmd->add_option("--export", x_format, "dot | aut | table | mrmc")
        ->required()
        ->check(CLI::IsMember({"dot", "aut", "table", "mrmc"}));
    exp2_cmd->add_option("--commit", x_commit, "formula for mrmc labels");
    exp2_cmd->add_option("--spec", x_spec, "spec file providing macros");
    exp2_cmd->add_option("--out", x_out, "destination (basename for mrmc)");

    // corpus
    std::string k_name;
    std::vector<unsigned> k_params;
    auto* corpus_cmd = app.add_subcommand("corpus", "print a packaged specification");
    corpus_cmd->add_option("name", k_name, "minepump | arbiter | arb-hard | arb-soft | arb-hard-assume | arb-tok")
        ->required();
    corpus_cmd->add_option("params", k_params, "numeric parameters");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compile_cmd) return cmd_compile(c_spec, c_type, c_formula, c_format, c_out);
        if (*synth_cmd) return cmd_synth(sa);
        if (*det_cmd) {
            auto l = load_aut(d_aut);
            auto ord = d_ord.empty() ? synth::OutputOrdering{} : synth::parse_ordering(d_ord, l.reg);
            auto c = synth::determinize(l.dfa, ord, l.reg);
            std::cerr << fmt::format("controller: {} states\n", c.state_count());
            write_automaton(c, l.reg, d_format, d_out);
            return kExitOk;
        }
        if (*sim_cmd) {
            auto l = load_aut(s_aut);
            auto defs = load_defs(s_spec, l.reg);
            std::optional<Dfa> mon;
            if (!s_monitor.empty()) mon = compile(formula_arg(s_monitor, l.reg, defs), l.reg);
            auto t = analysis::simulate(l.dfa, read_trace(s_trace, l.reg), l.reg, mon ? &*mon : nullptr);
            Sink out(s_out);
            std::string body = word_rows(t.letters, l.reg, false);
            std::istringstream rows(body);
            std::string row;
            for (std::size_t i = 0; std::getline(rows, row); ++i) {
                out.os() << row;
                if (mon) out.os() << "," << (i == 0 ? std::string("monitor") : t.monitor[i - 1] ? "1" : "0");
                out.os() << "\n";
            }
            return kExitOk;
        }
        if (*exp_cmd) {
            auto l = load_aut(e_aut);
            auto c = formula_arg(e_commit, l.reg, load_defs(e_spec, l.reg));
            auto m = analysis::build_dtmc(l.dfa, compile(c, l.reg), l.reg);
            std::cout << fmt::format("{:.7f}\n", analysis::steady_state(m).value);
            if (e_steps > 0) {
                const std::size_t runs = 100;
                std::cout << fmt::format("monte carlo {:.7f}\n",
                                         analysis::monte_carlo(m, runs, std::max<std::size_t>(1, e_steps / runs), e_seed));
            }
            return kExitOk;
        }
        if (*dom_cmd) {
            auto a = load_aut(m_s1);
            auto b = load_aut(m_s2);
            if (!(a.reg == b.reg)) throw Error("the two supervisors have different interfaces");
            auto c = formula_arg(m_commit, a.reg, load_defs(m_spec, a.reg));
            auto r = analysis::check_dominance(a.dfa, b.dfa, c, a.reg);
            if (r.holds) {
                std::cout << "holds\n";
            } else {
                std::cout << "fails; input word guaranteed by S1 but not by S2:\n"
                          << word_rows(*r.counterexample, a.reg, true);
            }
            return kExitOk;
        }
        if (*len_cmd) {
            auto l = load_aut(l_aut);
            auto defs = load_defs(l_spec, l.reg);
            Dfa m = l.dfa;
            if (!l_assume.empty())
                m = dfa::product(m, synth::prefix_closure(compile(formula_arg(l_assume, l.reg, defs), l.reg)),
                                 dfa::comb::and_);
            auto r = analysis::maxlen(m, formula_arg(l_pattern, l.reg, defs), l.reg);
            if (r.infinite) std::cout << "infinite\n";
            else if (r.unsatisfiable) std::cout << "0 (pattern unsatisfiable)\n";
            else std::cout << r.value << "\n";
            return kExitOk;
        }
        if (*exp2_cmd) {
            auto l = load_aut(x_aut);
            if (x_format == "mrmc") {
                if (x_commit.empty()) throw Error("mrmc export needs --commit");
                auto c = formula_arg(x_commit, l.reg, load_defs(x_spec, l.reg));
                analysis::export_mrmc(l.dfa, c, l.reg, x_out.empty() ? std::string("controller") : x_out);
            } else {
                write_automaton(l.dfa, l.reg, x_format, x_out);
            }
            return kExitOk;
        }
        if (*corpus_cmd) {
            auto need = [&](std::size_t n) {
                if (k_params.size() != n)
                    throw Error(fmt::format("'{}' takes {} parameter(s)", k_name, n));
            };
            auto& p = k_params;
            if (k_name == "minepump") need(4), std::cout << spec::corpus::minepump(p[0], p[1], p[2], p[3]);
            else if (k_name == "arbiter") need(3), std::cout << spec::corpus::arbiter(p[0], p[1], p[2]);
            else if (k_name == "arb-hard") need(2), std::cout << spec::corpus::arb_hard(p[0], p[1]);
            else if (k_name == "arb-soft") need(2), std::cout << spec::corpus::arb_soft(p[0], p[1]);
            else if (k_name == "arb-hard-assume") need(3), std::cout << spec::corpus::arb_hard_assume(p[0], p[1], p[2]);
            else if (k_name == "arb-tok") need(1), std::cout << spec::corpus::arb_tok(p[0]);
            else throw Error("unknown corpus entry '" + k_name + "'");
            return kExitOk;
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitError;
    }
    return kExitError;
}
