#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "weakcat/basis.hpp"

namespace weakcat {

// Pure state over a CompositeBasis. Value type: all operations return
// fresh states and never mutate their inputs.
class StateVector {
public:
    StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

    const BasisPtr& basis() const { return basis_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Amplitude amplitude(std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    double norm() const { return amplitudes_.norm(); }
    double norm_squared() const { return amplitudes_.squaredNorm(); }
    bool is_normalized(double tol = 1e-12) const;

private:
    BasisPtr basis_;
    Eigen::VectorXcd amplitudes_;
};

// Unit basis ket addressed by one level label per subsystem, in order.
StateVector basis_ket(const BasisPtr& basis, const std::vector<std::string>& labels);

// Linear combination sum_i coeff_i * state_i. All states must share a basis.
StateVector superpose(const std::vector<std::pair<Amplitude, StateVector>>& terms);

// <bra|ket>, conjugate-linear in the first argument.
Amplitude inner(const StateVector& bra, const StateVector& ket);

// Returns s/||s||; throws on (numerically) null states.
StateVector normalize(const StateVector& s);

// Kronecker product; the result basis concatenates the subsystem lists.
StateVector tensor_state(const StateVector& a, const StateVector& b);

}  // namespace weakcat
