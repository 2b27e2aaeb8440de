#pragma once

#include <vector>

#include "qds/dfa/diagram.hpp"

namespace qds::synth::detail {

using dfa::Diagram;
using dfa::kNoNode;
using dfa::NodeId;
using dfa::StateId;

// Copies the diagram below `n` into `dst`, mapping each leaf target through
// `f`. `memo` is indexed by source node id and shared across calls.
template <class F>
NodeId map_leaves(const Diagram& src, NodeId n, Diagram& dst, std::vector<NodeId>& memo, const F& f) {
    if (memo.size() < src.size()) memo.resize(src.size(), kNoNode);
    if (memo[n] != kNoNode) return memo[n];
    NodeId r;
    if (src.is_leaf(n)) {
        r = dst.leaf(f(src.target(n)));
    } else {
        NodeId lo = map_leaves(src, src.lo(n), dst, memo, f);
        NodeId hi = map_leaves(src, src.hi(n), dst, memo, f);
        r = dst.node(src.var(n), lo, hi);
    }
    memo[n] = r;
    return r;
}

}  // namespace qds::synth::detail
