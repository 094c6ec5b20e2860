#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "weakcat/weak_value.hpp"

namespace weakcat {

// Measurement-device pointer discretized on a uniform position grid
// x_k = -span + k*dx, k = 0..n-1, dx = 2*span/n (span is the half-width).
// Amplitudes carry continuum normalization: sum |amp_k|^2 * dx = 1.
// Units are dimensionless with hbar = 1.
struct PointerState {
    double sigma = 0.0;
    double span = 0.0;
    double dx = 0.0;
    Eigen::VectorXcd amps;

    std::size_t size() const { return static_cast<std::size_t>(amps.size()); }
    double position(std::size_t k) const { return -span + static_cast<double>(k) * dx; }

    double norm_squared() const;
    double mean_position() const;
    double position_variance() const;
    double mean_momentum() const;
    double momentum_variance() const;
};

// Ground-state Gaussian profile exp(-x^2 / (4 sigma^2)), so that
// Var(x) = sigma^2 and Var(p) = 1/(4 sigma^2).
// Pass span = 0 to get the default half-width 16*sigma.
PointerState gaussian_pointer(double sigma, std::size_t n = 256, double span = 0.0);

struct CouplingResult {
    double g = 0.0;
    double mean_position_shift = 0.0;
    double mean_momentum_shift = 0.0;
    double success_prob = 0.0;
    // Norm of the joint system(x)pointer state before post-selection;
    // equals 1 up to grid roundoff because the coupling is unitary.
    double joint_norm_check = 0.0;
};

// Impulsive von Neumann interaction exp(-i g A (x) p_hat) applied to
// (U|pre>) (x) |pointer>, followed by post-selection on <post|. Each
// spectral branch of A translates the pointer by g*lambda (computed in the
// momentum representation, so the translation is exact on the periodic
// grid). Conditional shifts read back Re/Im of the weak value:
//   mean position shift -> g * Re(A_w)
//   mean momentum shift -> 2 g Var(p) * Im(A_w)
// When the post-selection removes essentially all amplitude
// (success_prob < 1e-24) the conditional state is null and both shifts are
// reported as 0.
CouplingResult couple_and_postselect(const LinearOperator& a, const PrePostEnsemble& ensemble,
                                     const PointerState& pointer, double g);

struct WeakLimitRow {
    double g = 0.0;
    double position_shift = 0.0;
    double momentum_shift = 0.0;
    double predicted_position = 0.0;  // g * Re(A_w)
    double predicted_momentum = 0.0;  // 2 g Var(p) * Im(A_w)
    double position_error = 0.0;
    double momentum_error = 0.0;
};

// Sweep of coupling strengths on the default grid for the given sigma.
std::vector<WeakLimitRow> weak_limit_report(const LinearOperator& a, const PrePostEnsemble& ensemble,
                                            double sigma, const std::vector<double>& couplings);

}  // namespace weakcat
