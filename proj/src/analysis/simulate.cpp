#include "qds/analysis/analysis.hpp"
#include "qds/error.hpp"

namespace qds::analysis {

Trace simulate(const Dfa& cnt, const Word& inputs, const VarRegistry& reg, const Dfa* monitor) {
    Stepper st(cnt, reg);
    Trace t;
    StateId s = cnt.initial();
    StateId m = monitor ? monitor->initial() : 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto mv = st.move(s, inputs[i]);
        if (!mv) throw Error("controller blocks at step " + std::to_string(i));
        s = mv->next;
        if (monitor) {
            m = monitor->step(m, mv->letter);
            t.monitor.push_back(monitor->accepting(m));
        }
        t.letters.push_back(std::move(mv->letter));
    }
    return t;
}

}  // namespace qds::analysis
