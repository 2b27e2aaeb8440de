#include "qds/dfa/diagram.hpp"

#include "qds/error.hpp"

namespace qds::dfa {

namespace {

inline std::size_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
}

}  // namespace

Diagram::Diagram() : table_(64, kNoNode), mask_(63) {}

void Diagram::reserve(std::size_t n) {
    nodes_.reserve(n);
    while (table_.size() < 2 * n) grow();
}

std::size_t Diagram::slot(VarId v, NodeId lo, NodeId hi) const {
    std::uint64_t h = (static_cast<std::uint64_t>(v) * 0x9e3779b97f4a7c15ULL) ^
                      (static_cast<std::uint64_t>(lo) << 32 | hi);
    std::size_t i = mix(h) & mask_;
    while (true) {
        NodeId n = table_[i];
        if (n == kNoNode) return i;
        const Node& x = nodes_[n];
        if (x.var == v && x.lo == lo && x.hi == hi) return i;
        i = (i + 1) & mask_;
    }
}

void Diagram::grow() {
    std::vector<NodeId> old(table_.size() * 2, kNoNode);
    table_.swap(old);
    mask_ = table_.size() - 1;
    for (NodeId n = 0; n < nodes_.size(); ++n) {
        const Node& x = nodes_[n];
        table_[slot(x.var, x.lo, x.hi)] = n;
    }
}

NodeId Diagram::leaf(StateId s) {
    std::size_t i = slot(kLeafVar, s, 0);
    if (table_[i] != kNoNode) return table_[i];
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{kLeafVar, s, 0});
    table_[i] = id;
    if (2 * nodes_.size() > table_.size()) grow();
    return id;
}

NodeId Diagram::node(VarId v, NodeId lo, NodeId hi) {
    if (lo == hi) return lo;
    if ((!is_leaf(lo) && var(lo) <= v) || (!is_leaf(hi) && var(hi) <= v))
        throw Error("decision diagram variable order violated");
    std::size_t i = slot(v, lo, hi);
    if (table_[i] != kNoNode) return table_[i];
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{v, lo, hi});
    table_[i] = id;
    if (2 * nodes_.size() > table_.size()) grow();
    return id;
}

std::vector<Cube> paths(const Diagram& dd, NodeId n) {
    std::vector<Cube> out;
    std::vector<std::pair<VarId, bool>> prefix;
    auto rec = [&](auto& self, NodeId x) -> void {
        if (dd.is_leaf(x)) {
            out.push_back(Cube{prefix, dd.target(x)});
            return;
        }
        prefix.emplace_back(dd.var(x), false);
        self(self, dd.lo(x));
        prefix.back().second = true;
        self(self, dd.hi(x));
        prefix.pop_back();
    };
    rec(rec, n);
    return out;
}

}  // namespace qds::dfa
