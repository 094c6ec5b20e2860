#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weakcat/linear_op.hpp"
#include "weakcat/state.hpp"

namespace weakcat {

// Threshold below which <post|U|pre> counts as zero and conditioning on the
// post-selection is refused.
inline constexpr double kOrthogonalTol = 1e-12;

// Pre/post-selected ensemble with optional intermediate unitary evolution.
// Pre and post states are unit-normalized on construction.
class PrePostEnsemble {
public:
    PrePostEnsemble(const StateVector& pre, const StateVector& post,
                    std::optional<LinearOperator> evolution = std::nullopt);

    const StateVector& pre() const { return pre_; }
    const StateVector& post() const { return post_; }
    const std::optional<LinearOperator>& evolution() const { return evolution_; }

    // U|pre> (or |pre> itself when no evolution is attached).
    const StateVector& evolved_pre() const { return evolved_pre_; }
    // <post|U|pre>
    Amplitude overlap() const { return overlap_; }
    // |<post|U|pre>|^2
    double postselect_probability() const;
    bool orthogonal(double tol = kOrthogonalTol) const;

private:
    StateVector pre_;
    StateVector post_;
    std::optional<LinearOperator> evolution_;
    StateVector evolved_pre_;
    Amplitude overlap_;
};

// Result of a weak measurement: the weak value itself plus the conditioning
// data it was computed against.
struct WeakValue {
    Amplitude value;              // <post|A U|pre> / <post|U|pre>
    std::string observable_name;  // name of A, possibly empty
    Amplitude overlap;            // <post|U|pre>
    double postselect_prob;       // |overlap|^2, in [0,1]
};

// Weak value of A between the ensemble's pre and post selections.  Throws if
// the ensemble is orthogonal (post-selection impossible) or A is not
// Hermitian.
WeakValue weak_value(const LinearOperator& a, const PrePostEnsemble& ensemble);

// |<post|U|pre>|^2 — convenience accessor mirroring the member.
double postselect_probability(const PrePostEnsemble& ensemble);

// The reversed-order ratio <chi|A|post> / <chi|post> with |chi> = U|pre>
// (pre state in the bra). Equals the complex conjugate of weak_value for
// Hermitian observables; computed independently, never derived from
// weak_value's result.
Amplitude weak_value_reversed(const LinearOperator& a, const PrePostEnsemble& ensemble);

// Born expectation <s|A|s> of a Hermitian A on a unit state.
double expectation(const LinearOperator& a, const StateVector& s);

// One spectral branch of a Hermitian operator: a (possibly degenerate)
// eigenvalue and the projector onto its eigenspace.
struct SpectralBranch {
    double eigenvalue;
    Eigen::MatrixXcd projector;
};

// Eigenvalues within cluster_tol of each other share one branch.
std::vector<SpectralBranch> hermitian_branches(const LinearOperator& a, double cluster_tol = 1e-9);

struct MeasurementOutcome {
    double eigenvalue;
    StateVector collapsed;
};

// Projective measurement of Hermitian A on |s>, sampled from the Born
// distribution. Identical (seed, A, s) inputs give identical outcomes on
// every platform.
MeasurementOutcome strong_measure(const LinearOperator& a, const StateVector& s, std::uint64_t seed);

}  // namespace weakcat
