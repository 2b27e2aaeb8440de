#pragma once

#include <cstdint>
#include <vector>

#include "qds/qddc/registry.hpp"

namespace qds::dfa {

using StateId = std::uint32_t;
using NodeId = std::uint32_t;

inline constexpr VarId kLeafVar = 0xFFFFFFFFu;
inline constexpr NodeId kNoNode = 0xFFFFFFFFu;

// Hash-consed multi-terminal decision diagram. Decision nodes test a
// variable; terminals carry a target state. Nodes are reduced and ordered,
// and every node id is larger than the ids of its children, so a pass in id
// order visits children first.
class Diagram {
public:
    Diagram();

    NodeId leaf(StateId s);
    NodeId node(VarId v, NodeId lo, NodeId hi);

    bool is_leaf(NodeId n) const { return nodes_[n].var == kLeafVar; }
    VarId var(NodeId n) const { return nodes_[n].var; }
    NodeId lo(NodeId n) const { return nodes_[n].lo; }
    NodeId hi(NodeId n) const { return nodes_[n].hi; }
    StateId target(NodeId n) const { return nodes_[n].lo; }

    std::size_t size() const { return nodes_.size(); }
    void reserve(std::size_t n);

    // Follows the path selected by value(v) for each tested v; returns the leaf.
    template <class Lookup>
    NodeId walk(NodeId n, const Lookup& value) const {
        while (!is_leaf(n)) n = value(var(n)) ? hi(n) : lo(n);
        return n;
    }

private:
    struct Node {
        VarId var;
        NodeId lo, hi;
    };
    std::size_t slot(VarId v, NodeId lo, NodeId hi) const;
    void grow();

    std::vector<Node> nodes_;
    std::vector<NodeId> table_;
    std::size_t mask_;
};

// One path of a diagram from a root to a terminal: the literals fixed on the
// path, in variable order.
struct Cube {
    std::vector<std::pair<VarId, bool>> literals;
    StateId target;
};

// Enumerates all paths below n (lo branch first).
std::vector<Cube> paths(const Diagram& dd, NodeId n);

}  // namespace qds::dfa
