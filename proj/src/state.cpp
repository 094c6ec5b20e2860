#include "weakcat/state.hpp"

#include <cmath>
#include <stdexcept>

namespace weakcat {

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (!basis_) {
        throw std::invalid_argument("state needs a basis");
    }
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension()) {
        throw std::invalid_argument("amplitude count does not match basis dimension");
    }
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
        if (!amplitude_finite(amplitudes_(i))) {
            throw std::invalid_argument("non-finite amplitude at index " + std::to_string(i));
        }
    }
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm() - 1.0) <= tol;
}

StateVector basis_ket(const BasisPtr& basis, const std::vector<std::string>& labels) {
    if (!basis) throw std::invalid_argument("basis_ket needs a basis");
    if (labels.size() != basis->subsystem_count()) {
        throw std::invalid_argument("basis_ket expects one level label per subsystem");
    }
    std::vector<std::size_t> coords(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        coords[i] = basis->level_index(i, labels[i]);
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    amps(static_cast<Eigen::Index>(basis->flat_index(coords))) = 1.0;
    return StateVector(basis, std::move(amps));
}

StateVector superpose(const std::vector<std::pair<Amplitude, StateVector>>& terms) {
    if (terms.empty()) {
        throw std::invalid_argument("superpose needs at least one term");
    }
    const BasisPtr& basis = terms.front().second.basis();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    for (const auto& [coeff, state] : terms) {
        if (!same_basis(state.basis(), basis)) {
            throw std::invalid_argument("superpose terms live in different bases");
        }
        if (!amplitude_finite(coeff)) {
            throw std::invalid_argument("superpose coefficient is not finite");
        }
        amps += coeff * state.amplitudes();
    }
    return StateVector(basis, std::move(amps));
}

Amplitude inner(const StateVector& bra, const StateVector& ket) {
    if (!same_basis(bra.basis(), ket.basis())) {
        throw std::invalid_argument("inner product requires a common basis");
    }
    return bra.amplitudes().dot(ket.amplitudes());
}

StateVector normalize(const StateVector& s) {
    const double n = s.norm();
    if (n <= 1e-14) {
        throw std::invalid_argument("cannot normalize a null state");
    }
    return StateVector(s.basis(), s.amplitudes() / n);
}

StateVector tensor_state(const StateVector& a, const StateVector& b) {
    std::vector<Subsystem> subsystems = a.basis()->subsystems();
    const auto& more = b.basis()->subsystems();
    subsystems.insert(subsystems.end(), more.begin(), more.end());
    BasisPtr basis = make_basis(std::move(subsystems));  // checks name clashes and the size cap

    const Eigen::Index db = b.amplitudes().size();
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(basis->dimension()));
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
        amps.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
    }
    return StateVector(std::move(basis), std::move(amps));
}

}  // namespace weakcat
