#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <unordered_map>

#include "qds/analysis/analysis.hpp"
#include "qds/compile/compiler.hpp"
#include "qds/error.hpp"

namespace qds::analysis {

namespace {

constexpr std::size_t kMaxInputs = 20;

using SpMat = Eigen::SparseMatrix<double>;

// Tarjan, iterative. Returns the component of every state; components are
// numbered in reverse topological order.
std::vector<std::uint32_t> scc(const Dtmc& m, std::uint32_t& count) {
    const std::uint32_t n = static_cast<std::uint32_t>(m.size());
    constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
    std::vector<std::uint32_t> index(n, kUnset), low(n), comp(n, kUnset), stack;
    std::vector<bool> on(n, false);
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::uint32_t next = 0;
    count = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next++;
        stack.push_back(root);
        on[root] = true;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < m.rows[v].size()) {
                std::uint32_t w = m.rows[v][i++].first;
                if (index[w] == kUnset) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on[w] = true;
                    call.push_back({w, 0});
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on[w] = false;
                    comp[w] = count;
                } while (w != done);
                ++count;
            }
        }
    }
    return comp;
}

template <class Solver>
void factor(Solver& lu, SpMat& a) {
    a.makeCompressed();
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) throw Error("singular system in steady-state analysis");
}

std::vector<double> stationary(const Dtmc& m, const std::vector<std::uint32_t>& states) {
    const std::size_t k = states.size();
    if (k == 1) return {1.0};
    std::unordered_map<std::uint32_t, std::size_t> pos;
    for (std::size_t i = 0; i < k; ++i) pos[states[i]] = i;
    // pi (P - I) = 0 with the last equation replaced by sum(pi) = 1.
    std::vector<Eigen::Triplet<double>> ts;
    for (std::size_t i = 0; i < k; ++i) {
        for (auto [t, p] : m.rows[states[i]]) {
            std::size_t j = pos.at(t);
            if (j + 1 < k) ts.emplace_back(j, i, p);
        }
        if (i + 1 < k) ts.emplace_back(i, i, -1.0);
        ts.emplace_back(k - 1, i, 1.0);
    }
    SpMat a(k, k);
    a.setFromTriplets(ts.begin(), ts.end());
    Eigen::SparseLU<SpMat> lu;
    factor(lu, a);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs[k - 1] = 1.0;
    Eigen::VectorXd x = lu.solve(rhs);
    return {x.data(), x.data() + k};
}

}  // namespace

Dtmc build_dtmc(const Dfa& cnt, const Dfa& monitor, const VarRegistry& reg) {
    const std::size_t ni = reg.num_inputs();
    if (ni > kMaxInputs) throw Error("too many inputs to enumerate");
    Stepper st(cnt, reg);
    const std::uint64_t letters = std::uint64_t{1} << ni;
    const double p = 1.0 / static_cast<double>(letters);

    Dtmc m;
    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    std::vector<std::pair<StateId, StateId>> pairs;
    auto intern = [&](StateId c, StateId s) {
        std::uint64_t key = (std::uint64_t{c} << 32) | s;
        auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(pairs.size()));
        if (fresh) pairs.push_back({c, s});
        return it->second;
    };
    m.initial = intern(cnt.initial(), monitor.initial());
    Valuation in(ni);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        auto [c, s] = pairs[q];
        std::map<std::uint32_t, double> row;
        for (std::uint64_t bits = 0; bits < letters; ++bits) {
            for (std::size_t i = 0; i < ni; ++i) in[i] = (bits >> i) & 1;
            auto mv = st.move(c, in);
            if (!mv) throw Error("controller blocks in state " + std::to_string(c));
            row[intern(mv->next, monitor.step(s, mv->letter))] += p;
        }
        m.rows.emplace_back(row.begin(), row.end());
        m.accepting.push_back(monitor.accepting(s));
    }
    return m;
}

SteadyState steady_state(const Dtmc& m) {
    const std::size_t n = m.size();
    std::uint32_t count = 0;
    auto comp = scc(m, count);
    std::vector<bool> bottom(count, true);
    for (std::size_t s = 0; s < n; ++s)
        for (auto [t, p] : m.rows[s])
            if (comp[t] != comp[s]) bottom[comp[s]] = false;

    SteadyState r;
    std::vector<int> which(count, -1);
    for (std::uint32_t c = 0; c < count; ++c)
        if (bottom[c]) {
            which[c] = static_cast<int>(r.bsccs.size());
            r.bsccs.emplace_back();
        }
    std::vector<std::uint32_t> transient;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (which[comp[s]] >= 0) r.bsccs[which[comp[s]]].states.push_back(s);
        else transient.push_back(s);
    }
    for (auto& b : r.bsccs) {
        b.stationary = stationary(m, b.states);
        for (std::size_t i = 0; i < b.states.size(); ++i)
            if (m.accepting[b.states[i]]) b.accepting_mass += b.stationary[i];
    }

    int home = which[comp[m.initial]];
    if (home >= 0) {
        r.bsccs[home].absorption = 1.0;
    } else {
        // (I - Q) x_b = R 1_b over the transient states.
        const std::size_t k = transient.size();
        std::unordered_map<std::uint32_t, std::size_t> pos;
        for (std::size_t i = 0; i < k; ++i) pos[transient[i]] = i;
        std::vector<Eigen::Triplet<double>> ts;
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(k, r.bsccs.size());
        for (std::size_t i = 0; i < k; ++i) {
            ts.emplace_back(i, i, 1.0);
            for (auto [t, p] : m.rows[transient[i]]) {
                int b = which[comp[t]];
                if (b >= 0) rhs(i, b) += p;
                else ts.emplace_back(i, pos.at(t), -p);
            }
        }
        SpMat a(k, k);
        a.setFromTriplets(ts.begin(), ts.end());
        Eigen::SparseLU<SpMat> lu;
        factor(lu, a);
        Eigen::MatrixXd x = lu.solve(rhs);
        const std::size_t row = pos.at(m.initial);
        for (std::size_t b = 0; b < r.bsccs.size(); ++b) r.bsccs[b].absorption = x(row, b);
    }
    for (const auto& b : r.bsccs) r.value += b.absorption * b.accepting_mass;
    return r;
}

double expected_value(const Dfa& cnt, const FormulaPtr& c, const VarRegistry& reg) {
    return steady_state(build_dtmc(cnt, compile(c, reg), reg)).value;
}

double monte_carlo(const Dtmc& m, std::size_t runs, std::size_t steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double total = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        std::uint32_t s = m.initial;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < steps; ++i) {
            double x = u(rng);
            const auto& row = m.rows[s];
            s = row.back().first;
            for (auto [t, p] : row) {
                if (x < p) {
                    s = t;
                    break;
                }
                x -= p;
            }
            hits += m.accepting[s];
        }
        total += static_cast<double>(hits) / static_cast<double>(steps);
    }
    return total / static_cast<double>(runs);
}

void write_mrmc(const Dtmc& m, std::ostream& tra, std::ostream& lab) {
    std::size_t edges = 0;
    for (const auto& row : m.rows) edges += row.size();
    tra << "STATES " << m.size() << "\nTRANSITIONS " << edges << "\n";
    tra << std::setprecision(17);
    // MRMC numbers states from 1; put the initial state first.
    auto id = [&](std::uint32_t s) {
        if (s == m.initial) return std::uint32_t{1};
        return s < m.initial ? s + 2 : s + 1;
    };
    std::vector<std::uint32_t> order(m.size());
    for (std::uint32_t s = 0; s < m.size(); ++s) order[id(s) - 1] = s;
    for (std::uint32_t s : order) {
        std::vector<std::pair<std::uint32_t, double>> row;
        for (auto [t, p] : m.rows[s]) row.push_back({id(t), p});
        std::sort(row.begin(), row.end());
        for (auto [t, p] : row) tra << id(s) << " " << t << " " << p << "\n";
    }
    lab << "#DECLARATION\naccept\n#END\n";
    for (std::uint32_t s : order)
        if (m.accepting[s]) lab << id(s) << " accept\n";
}

void export_mrmc(const Dfa& cnt, const FormulaPtr& c, const VarRegistry& reg, const std::string& basename) {
    auto m = build_dtmc(cnt, compile(c, reg), reg);
    std::ofstream tra(basename + ".tra"), lab(basename + ".lab");
    if (!tra || !lab) throw Error("cannot write '" + basename + ".tra/.lab'");
    write_mrmc(m, tra, lab);
}

}  // namespace qds::analysis
