#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qds {

using VarId = std::uint32_t;

// Ids at or above this value are reserved for quantified (bound) variables.
// They sort after every registered variable, so projection only ever has to
// erase the bottom of a diagram.
inline constexpr VarId kBoundBase = 1u << 20;

enum class VarKind { Input, Output, Witness };

// Ordered universe of propositional variables. The id of a variable is its
// position in the order inputs, outputs, witnesses. Witnesses are appended
// during synthesis; inputs and outputs are fixed at construction.
class VarRegistry {
public:
    VarRegistry() = default;
    VarRegistry(std::vector<std::string> inputs, std::vector<std::string> outputs);

    VarId add_witness(const std::string& name);

    std::optional<VarId> find(std::string_view name) const;
    VarId id(std::string_view name) const;  // throws on unknown name
    const std::string& name(VarId v) const;
    VarKind kind(VarId v) const;
    bool is_input(VarId v) const { return v < num_inputs_; }

    std::size_t size() const { return names_.size(); }
    std::size_t num_inputs() const { return num_inputs_; }
    std::size_t num_outputs() const { return num_outputs_; }
    std::size_t num_witnesses() const { return names_.size() - num_inputs_ - num_outputs_; }

    std::vector<VarId> inputs() const;
    std::vector<VarId> non_inputs() const;  // outputs followed by witnesses
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const VarRegistry& o) const {
        return names_ == o.names_ && num_inputs_ == o.num_inputs_ && num_outputs_ == o.num_outputs_;
    }

private:
    void insert(const std::string& name);

    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> index_;
    std::size_t num_inputs_ = 0;
    std::size_t num_outputs_ = 0;
};

}  // namespace qds
