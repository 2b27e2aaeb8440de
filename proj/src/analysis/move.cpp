#include <ostream>

#include "qds/analysis/analysis.hpp"

namespace qds::analysis {

Stepper::Stepper(const Dfa& cnt, const VarRegistry& reg) : cnt_(cnt), reg_(reg) {
    const auto& dd = cnt.diagram();
    const auto sink = cnt.reject_sink();
    live_.resize(dd.size());
    for (dfa::NodeId n = 0; n < dd.size(); ++n)
        live_[n] = dd.is_leaf(n) ? !sink || dd.target(n) != *sink : live_[dd.lo(n)] || live_[dd.hi(n)];
}

std::optional<Move> Stepper::move(StateId s, const Valuation& in) const {
    const auto& dd = cnt_.diagram();
    Valuation v(reg_.size(), false);
    for (std::size_t i = 0; i < reg_.num_inputs() && i < in.size(); ++i) v[i] = in[i];
    // Inputs come first in the variable order, so the walk settles them
    // before any output is tested.
    dfa::NodeId n = cnt_.root(s);
    while (!dd.is_leaf(n) && reg_.is_input(dd.var(n))) n = v[dd.var(n)] ? dd.hi(n) : dd.lo(n);
    if (!live_[n]) return std::nullopt;
    while (!dd.is_leaf(n)) {
        if (live_[dd.lo(n)]) {
            n = dd.lo(n);
        } else {
            v[dd.var(n)] = true;
            n = dd.hi(n);
        }
    }
    return Move{std::move(v), dd.target(n)};
}


void write_table(std::ostream& os, const Dfa& cnt, const VarRegistry& reg) {
    const auto& dd = cnt.diagram();
    const auto sink = cnt.reject_sink();
    const std::size_t ni = reg.num_inputs();
    Stepper st(cnt, reg);
    std::string cube(ni, '-');
    Valuation in(ni, false);
    auto emit = [&](StateId s, auto&& self, dfa::NodeId n) -> void {
        if (!dd.is_leaf(n) && reg.is_input(dd.var(n))) {
            VarId v = dd.var(n);
            for (int b = 0; b < 2; ++b) {
                cube[v] = b ? '1' : '0';
                in[v] = b;
                self(s, self, b ? dd.hi(n) : dd.lo(n));
            }
            cube[v] = '-';
            in[v] = false;
            return;
        }
        os << s << " " << (ni ? cube : std::string("-")) << " -> ";
        auto mv = st.move(s, in);
        if (!mv) {
            os << "blocked\n";
            return;
        }
        std::string out;
        for (std::size_t v = ni; v < reg.size(); ++v) out += mv->letter[v] ? '1' : '0';
        os << (out.empty() ? std::string("-") : out) << " " << mv->next << "\n";
    };
    for (StateId s = 0; s < cnt.state_count(); ++s)
        if (!sink || s != *sink) emit(s, emit, cnt.root(s));
}

}  // namespace qds::analysis
