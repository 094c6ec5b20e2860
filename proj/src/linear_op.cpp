#include "weakcat/linear_op.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace weakcat {

LinearOperator::LinearOperator(BasisPtr basis, Eigen::MatrixXcd entries, std::string name)
    : basis_(std::move(basis)), entries_(std::move(entries)), name_(std::move(name)) {
    if (!basis_) {
        throw std::invalid_argument("operator needs a basis");
    }
    const auto dim = static_cast<Eigen::Index>(basis_->dimension());
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw std::invalid_argument("operator shape does not match basis dimension");
    }
    if (!entries_.allFinite()) {
        throw std::invalid_argument("operator has non-finite entries");
    }
}

LinearOperator LinearOperator::identity(const BasisPtr& basis) {
    if (!basis) throw std::invalid_argument("identity needs a basis");
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    return LinearOperator(basis, Eigen::MatrixXcd::Identity(dim, dim), "I");
}

LinearOperator LinearOperator::adjoint() const {
    return LinearOperator(basis_, entries_.adjoint(), name_.empty() ? "" : name_ + "^+");
}

bool LinearOperator::is_hermitian(double tol) const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool LinearOperator::is_unitary(double tol) const {
    const auto dim = entries_.rows();
    return (entries_.adjoint() * entries_ - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol;
}

bool LinearOperator::is_projector(double tol) const {
    return is_hermitian(tol) && (entries_ * entries_ - entries_).cwiseAbs().maxCoeff() <= tol;
}

StateVector apply(const LinearOperator& op, const StateVector& s) {
    if (!same_basis(op.basis(), s.basis())) {
        throw std::invalid_argument("operator and state live in different bases");
    }
    return StateVector(s.basis(), op.entries() * s.amplitudes());
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    if (!same_basis(a.basis(), b.basis())) {
        throw std::invalid_argument("operator composition requires a common basis");
    }
    return LinearOperator(a.basis(), a.entries() * b.entries());
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    if (!same_basis(a.basis(), b.basis())) {
        throw std::invalid_argument("operator sum requires a common basis");
    }
    return LinearOperator(a.basis(), a.entries() + b.entries());
}

LinearOperator operator*(const Amplitude& c, const LinearOperator& a) {
    if (!amplitude_finite(c)) {
        throw std::invalid_argument("operator scale factor is not finite");
    }
    return LinearOperator(a.basis(), c * a.entries());
}

LinearOperator tensor_op(const LinearOperator& a, const LinearOperator& b) {
    std::vector<Subsystem> subsystems = a.basis()->subsystems();
    const auto& more = b.basis()->subsystems();
    subsystems.insert(subsystems.end(), more.begin(), more.end());
    BasisPtr basis = make_basis(std::move(subsystems));

    Eigen::MatrixXcd entries = Eigen::kroneckerProduct(a.entries(), b.entries());
    std::string name;
    if (!a.name().empty() && !b.name().empty()) name = a.name() + "(x)" + b.name();
    return LinearOperator(std::move(basis), std::move(entries), std::move(name));
}

LinearOperator projector_onto(const std::vector<StateVector>& orthonormal_states) {
    if (orthonormal_states.empty()) {
        throw std::invalid_argument("projector_onto needs at least one state");
    }
    const BasisPtr& basis = orthonormal_states.front().basis();
    constexpr double tol = 1e-10;
    for (std::size_t i = 0; i < orthonormal_states.size(); ++i) {
        const auto& v = orthonormal_states[i];
        if (!same_basis(v.basis(), basis)) {
            throw std::invalid_argument("projector_onto states live in different bases");
        }
        if (std::abs(v.norm() - 1.0) > tol) {
            throw std::invalid_argument("projector_onto state " + std::to_string(i) + " is not unit");
        }
        for (std::size_t j = i + 1; j < orthonormal_states.size(); ++j) {
            if (std::abs(inner(v, orthonormal_states[j])) > tol) {
                throw std::invalid_argument("projector_onto states " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are not orthogonal");
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    Eigen::MatrixXcd entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& v : orthonormal_states) {
        entries += v.amplitudes() * v.amplitudes().adjoint();
    }
    return LinearOperator(basis, std::move(entries));
}

LinearOperator level_projector(const BasisPtr& basis, const std::string& subsystem,
                               const std::string& level) {
    if (!basis) throw std::invalid_argument("level_projector needs a basis");
    const auto sub = basis->subsystem_index(subsystem);
    if (!sub) {
        throw std::invalid_argument("unknown subsystem '" + subsystem + "'");
    }
    const std::size_t lvl = basis->level_index(*sub, level);
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    Eigen::MatrixXcd entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (basis->coordinate(static_cast<std::size_t>(i), *sub) == lvl) entries(i, i) = 1.0;
    }
    return LinearOperator(basis, std::move(entries), "proj(" + subsystem + "=" + level + ")");
}

}  // namespace weakcat
