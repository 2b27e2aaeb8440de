#include <chrono>

#include "qds/compile/compiler.hpp"
#include "qds/synth/synth.hpp"

namespace qds::synth {

namespace {

class Stopwatch {
public:
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

SynthResult synthesize(const SynthSpec& spec, VarRegistry& reg, const SynthConfig& cfg) {
    SynthResult r;
    Stopwatch sw;
    // Every prefix of a supervised run must satisfy the hard requirement.
    r.hard = prefix_closure(compile(spec.hard ? spec.hard : f::univ(), reg));
    r.times.compile_ms = sw.lap();

    auto game = mps(*r.hard, reg);
    r.times.mps_ms = sw.lap();
    r.realizable = game.realizable;
    if (!game.realizable) return r;
    r.mps = std::move(game.supervisor);

    r.arena = build_arena(*r.mps, spec.bindings, spec.soft, reg);
    r.times.arena_ms = sw.lap();

    r.values = cfg.enumerative ? value_iterate_enumerative(*r.arena, cfg.horizon, cfg.gamma, reg)
                               : value_iterate(*r.arena, cfg.horizon, cfg.gamma, reg);
    r.times.values_ms = sw.lap();

    r.mphos = cfg.enumerative ? mphos_enumerative(*r.arena, *r.values, reg) : mphos(*r.arena, *r.values, reg);
    r.times.mphos_ms = sw.lap();

    r.controller = determinize(*r.mphos, cfg.ord, reg);
    r.times.determinize_ms = sw.lap();
    return r;
}

}  // namespace qds::synth
