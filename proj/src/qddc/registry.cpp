#include "qds/qddc/registry.hpp"

#include "qds/error.hpp"

namespace qds {

VarRegistry::VarRegistry(std::vector<std::string> inputs, std::vector<std::string> outputs) {
    for (auto& n : inputs) insert(n);
    num_inputs_ = inputs.size();
    for (auto& n : outputs) insert(n);
    num_outputs_ = outputs.size();
}

void VarRegistry::insert(const std::string& name) {
    if (name.empty()) throw Error("empty variable name");
    if (index_.count(name)) throw Error("duplicate variable name '" + name + "'");
    if (names_.size() >= kBoundBase) throw Error("too many variables");
    index_.emplace(name, static_cast<VarId>(names_.size()));
    names_.push_back(name);
}

VarId VarRegistry::add_witness(const std::string& name) {
    insert(name);
    return static_cast<VarId>(names_.size() - 1);
}

std::optional<VarId> VarRegistry::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VarId VarRegistry::id(std::string_view name) const {
    auto v = find(name);
    if (!v) throw Error("unknown variable '" + std::string(name) + "'");
    return *v;
}

const std::string& VarRegistry::name(VarId v) const {
    if (v >= names_.size()) throw Error("variable id out of range");
    return names_[v];
}

VarKind VarRegistry::kind(VarId v) const {
    if (v < num_inputs_) return VarKind::Input;
    if (v < num_inputs_ + num_outputs_) return VarKind::Output;
    return VarKind::Witness;
}

std::vector<VarId> VarRegistry::inputs() const {
    std::vector<VarId> r;
    for (VarId v = 0; v < num_inputs_; ++v) r.push_back(v);
    return r;
}

std::vector<VarId> VarRegistry::non_inputs() const {
    std::vector<VarId> r;
    for (VarId v = static_cast<VarId>(num_inputs_); v < names_.size(); ++v) r.push_back(v);
    return r;
}

}  // namespace qds
