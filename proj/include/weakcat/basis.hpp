#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weakcat {

using Amplitude = std::complex<double>;

bool amplitude_finite(const Amplitude& a);

struct Subsystem {
    std::string name;
    std::vector<std::string> levels;

    bool operator==(const Subsystem&) const = default;
};

// Labeled composite Hilbert-space basis: an ordered list of subsystems,
// each with named levels. Flat indices are row-major with the first
// subsystem as the most significant coordinate, so tensor products of
// kets concatenate subsystem lists.
class CompositeBasis {
public:
    static constexpr std::size_t kMaxDimension = 4096;

    explicit CompositeBasis(std::vector<Subsystem> subsystems);

    std::size_t dimension() const { return dimension_; }
    std::size_t subsystem_count() const { return subsystems_.size(); }
    const Subsystem& subsystem(std::size_t i) const { return subsystems_.at(i); }
    const std::vector<Subsystem>& subsystems() const { return subsystems_; }

    std::optional<std::size_t> subsystem_index(std::string_view name) const;
    // Index of `label` within subsystem `sub`; throws std::invalid_argument
    // naming both the subsystem and the offending label.
    std::size_t level_index(std::size_t sub, std::string_view label) const;
    std::optional<std::size_t> find_level(std::size_t sub, std::string_view label) const;

    std::size_t flat_index(std::span<const std::size_t> level_indices) const;
    std::vector<std::size_t> unflatten(std::size_t flat) const;
    // Level coordinate of subsystem `sub` inside flat index `flat`.
    std::size_t coordinate(std::size_t flat, std::size_t sub) const;
    // Flat index equal to `flat` except subsystem `sub` is moved to `level`.
    std::size_t with_coordinate(std::size_t flat, std::size_t sub, std::size_t level) const;

    // Human-readable composite label, e.g. "|2,s_up>".
    std::string label_of(std::size_t flat) const;

    bool operator==(const CompositeBasis& other) const { return subsystems_ == other.subsystems_; }

private:
    std::vector<Subsystem> subsystems_;
    std::vector<std::size_t> strides_;
    std::size_t dimension_ = 0;
};

using BasisPtr = std::shared_ptr<const CompositeBasis>;

BasisPtr make_basis(std::vector<Subsystem> subsystems);

// Structural equality; pointer identity is just the fast path.
bool same_basis(const BasisPtr& a, const BasisPtr& b);

}  // namespace weakcat
