#include "weakcat/weak_value.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>

namespace weakcat {

namespace {

void require_hermitian(const LinearOperator& a, const char* what) {
    if (!a.is_hermitian()) {
        throw std::invalid_argument(std::string(what) + " requires a Hermitian operator" +
                                    (a.name().empty() ? "" : " ('" + a.name() + "')"));
    }
}

// Deterministic seed scrambler so that seeds 0,1,2,... give unrelated streams.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

PrePostEnsemble::PrePostEnsemble(const StateVector& pre, const StateVector& post,
                                 std::optional<LinearOperator> evolution)
    : pre_(normalize(pre)),
      post_(normalize(post)),
      evolution_(std::move(evolution)),
      evolved_pre_(pre_),
      overlap_(0.0) {
    if (!same_basis(pre_.basis(), post_.basis())) {
        throw std::invalid_argument("pre and post states live in different bases");
    }
    if (evolution_) {
        if (!same_basis(evolution_->basis(), pre_.basis())) {
            throw std::invalid_argument("evolution operator basis does not match the states");
        }
        if (!evolution_->is_unitary(1e-10)) {
            throw std::invalid_argument("intermediate evolution must be unitary");
        }
        evolved_pre_ = apply(*evolution_, pre_);
    }
    overlap_ = inner(post_, evolved_pre_);
}

double PrePostEnsemble::postselect_probability() const {
    return std::norm(overlap_);
}

bool PrePostEnsemble::orthogonal(double tol) const {
    return std::abs(overlap_) < tol;
}

WeakValue weak_value(const LinearOperator& a, const PrePostEnsemble& ensemble) {
    require_hermitian(a, "weak_value");
    if (!same_basis(a.basis(), ensemble.pre().basis())) {
        throw std::invalid_argument("observable basis does not match the ensemble");
    }
    if (ensemble.orthogonal()) {
        throw std::runtime_error("post-selection impossible: <post|U|pre> vanishes");
    }
    const Amplitude numerator = inner(ensemble.post(), apply(a, ensemble.evolved_pre()));
    return WeakValue{numerator / ensemble.overlap(), a.name(), ensemble.overlap(),
                     ensemble.postselect_probability()};
}

double postselect_probability(const PrePostEnsemble& ensemble) {
    return ensemble.postselect_probability();
}

Amplitude weak_value_reversed(const LinearOperator& a, const PrePostEnsemble& ensemble) {
    require_hermitian(a, "weak_value_reversed");
    if (!same_basis(a.basis(), ensemble.pre().basis())) {
        throw std::invalid_argument("observable basis does not match the ensemble");
    }
    const StateVector& chi = ensemble.evolved_pre();
    const Amplitude denominator = inner(chi, ensemble.post());
    if (std::abs(denominator) < kOrthogonalTol) {
        throw std::runtime_error("post-selection impossible: <post|U|pre> vanishes");
    }
    const Amplitude numerator = inner(chi, apply(a, ensemble.post()));
    return numerator / denominator;
}

double expectation(const LinearOperator& a, const StateVector& s) {
    require_hermitian(a, "expectation");
    if (!same_basis(a.basis(), s.basis())) {
        throw std::invalid_argument("observable basis does not match the state");
    }
    if (!s.is_normalized(1e-10)) {
        throw std::invalid_argument("expectation requires a unit-normalized state");
    }
    return inner(s, apply(a, s)).real();
}

std::vector<SpectralBranch> hermitian_branches(const LinearOperator& a, double cluster_tol) {
    require_hermitian(a, "hermitian_branches");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.entries());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
    const Eigen::MatrixXcd& evecs = solver.eigenvectors();

    std::vector<SpectralBranch> branches;
    Eigen::Index begin = 0;
    while (begin < evals.size()) {
        Eigen::Index end = begin + 1;
        while (end < evals.size() && evals(end) - evals(end - 1) <= cluster_tol) ++end;
        const auto block = evecs.middleCols(begin, end - begin);
        branches.push_back({evals.segment(begin, end - begin).mean(), block * block.adjoint()});
        begin = end;
    }
    return branches;
}

MeasurementOutcome strong_measure(const LinearOperator& a, const StateVector& s, std::uint64_t seed) {
    require_hermitian(a, "strong_measure");
    if (!same_basis(a.basis(), s.basis())) {
        throw std::invalid_argument("observable basis does not match the state");
    }
    if (!s.is_normalized(1e-10)) {
        throw std::invalid_argument("strong_measure requires a unit-normalized state");
    }

    const auto branches = hermitian_branches(a);
    std::vector<double> probs(branches.size());
    std::vector<Eigen::VectorXcd> projected(branches.size());
    double total = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        projected[i] = branches[i].projector * s.amplitudes();
        probs[i] = projected[i].squaredNorm();
        total += probs[i];
    }
    if (total <= 0.0) {
        throw std::runtime_error("degenerate Born distribution");  // cannot happen for unit states
    }

    // One uniform draw in [0,1): mt19937_64 and the shift construction are
    // both fully specified, so the outcome is platform-independent.
    std::mt19937_64 engine(splitmix64(seed));
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;

    std::size_t pick = branches.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        acc += probs[i] / total;
        if (u < acc) {
            pick = i;
            break;
        }
    }
    return MeasurementOutcome{branches[pick].eigenvalue,
                              normalize(StateVector(s.basis(), std::move(projected[pick])))};
}

}  // namespace weakcat
