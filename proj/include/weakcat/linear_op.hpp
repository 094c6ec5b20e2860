#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "weakcat/basis.hpp"
#include "weakcat/state.hpp"

namespace weakcat {

// Dense operator on a CompositeBasis, with an optional display name.
class LinearOperator {
public:
    LinearOperator(BasisPtr basis, Eigen::MatrixXcd entries, std::string name = "");

    static LinearOperator identity(const BasisPtr& basis);

    const BasisPtr& basis() const { return basis_; }
    std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    LinearOperator adjoint() const;
    bool is_hermitian(double tol = 1e-10) const;
    bool is_unitary(double tol = 1e-12) const;
    bool is_projector(double tol = 1e-12) const;

private:
    BasisPtr basis_;
    Eigen::MatrixXcd entries_;
    std::string name_;
};

StateVector apply(const LinearOperator& op, const StateVector& s);

// Composition: (a * b) |s> = a (b |s>).
LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator*(const Amplitude& c, const LinearOperator& a);

// Kronecker product, mirroring tensor_state.
LinearOperator tensor_op(const LinearOperator& a, const LinearOperator& b);

// Orthogonal projector onto the span of an orthonormal family.
LinearOperator projector_onto(const std::vector<StateVector>& orthonormal_states);

// Projector onto one level of one named subsystem (identity elsewhere).
LinearOperator level_projector(const BasisPtr& basis, const std::string& subsystem,
                               const std::string& level);

}  // namespace weakcat
