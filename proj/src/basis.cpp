#include "weakcat/basis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace weakcat {

bool amplitude_finite(const Amplitude& a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
}

CompositeBasis::CompositeBasis(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
    if (subsystems_.empty()) {
        throw std::invalid_argument("basis needs at least one subsystem");
    }
    std::set<std::string> seen_names;
    for (const auto& sub : subsystems_) {
        if (sub.name.empty()) {
            throw std::invalid_argument("subsystem name must be non-empty");
        }
        if (!seen_names.insert(sub.name).second) {
            throw std::invalid_argument("duplicate subsystem name '" + sub.name + "'");
        }
        if (sub.levels.empty()) {
            throw std::invalid_argument("subsystem '" + sub.name + "' has no levels");
        }
        std::set<std::string> seen_levels;
        for (const auto& lvl : sub.levels) {
            if (lvl.empty()) {
                throw std::invalid_argument("subsystem '" + sub.name + "' has an empty level label");
            }
            if (!seen_levels.insert(lvl).second) {
                throw std::invalid_argument("duplicate level '" + lvl + "' in subsystem '" + sub.name + "'");
            }
        }
    }
    dimension_ = 1;
    for (const auto& sub : subsystems_) {
        if (dimension_ > kMaxDimension / sub.levels.size()) {
            throw std::invalid_argument("composite dimension exceeds 4096");
        }
        dimension_ *= sub.levels.size();
    }
    strides_.assign(subsystems_.size(), 1);
    for (std::size_t i = subsystems_.size(); i-- > 1;) {
        strides_[i - 1] = strides_[i] * subsystems_[i].levels.size();
    }
}

std::optional<std::size_t> CompositeBasis::subsystem_index(std::string_view name) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> CompositeBasis::find_level(std::size_t sub, std::string_view label) const {
    const auto& levels = subsystems_.at(sub).levels;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] == label) return i;
    }
    return std::nullopt;
}

std::size_t CompositeBasis::level_index(std::size_t sub, std::string_view label) const {
    if (auto i = find_level(sub, label)) return *i;
    throw std::invalid_argument("unknown level '" + std::string(label) + "' in subsystem '" +
                                subsystems_.at(sub).name + "'");
}

std::size_t CompositeBasis::flat_index(std::span<const std::size_t> level_indices) const {
    if (level_indices.size() != subsystems_.size()) {
        throw std::invalid_argument("expected one level per subsystem");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (level_indices[i] >= subsystems_[i].levels.size()) {
            throw std::invalid_argument("level index out of range for subsystem '" + subsystems_[i].name + "'");
        }
        flat += level_indices[i] * strides_[i];
    }
    return flat;
}

std::vector<std::size_t> CompositeBasis::unflatten(std::size_t flat) const {
    if (flat >= dimension_) {
        throw std::invalid_argument("flat index out of range");
    }
    std::vector<std::size_t> out(subsystems_.size());
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        out[i] = (flat / strides_[i]) % subsystems_[i].levels.size();
    }
    return out;
}

std::size_t CompositeBasis::coordinate(std::size_t flat, std::size_t sub) const {
    return (flat / strides_.at(sub)) % subsystems_.at(sub).levels.size();
}

std::size_t CompositeBasis::with_coordinate(std::size_t flat, std::size_t sub, std::size_t level) const {
    if (level >= subsystems_.at(sub).levels.size()) {
        throw std::invalid_argument("level index out of range for subsystem '" + subsystems_[sub].name + "'");
    }
    const std::size_t old = coordinate(flat, sub);
    return flat - old * strides_[sub] + level * strides_[sub];
}

std::string CompositeBasis::label_of(std::size_t flat) const {
    auto coords = unflatten(flat);
    std::string out = "|";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ',';
        out += subsystems_[i].levels[coords[i]];
    }
    out += '>';
    return out;
}

BasisPtr make_basis(std::vector<Subsystem> subsystems) {
    return std::make_shared<const CompositeBasis>(std::move(subsystems));
}

bool same_basis(const BasisPtr& a, const BasisPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

}  // namespace weakcat
