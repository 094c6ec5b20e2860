#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "weakcat/pointer.hpp"

using namespace weakcat;

namespace {

const Amplitude kI(0.0, 1.0);

BasisPtr two_level() { return make_basis({{"q", {"a", "b"}}}); }

LinearOperator proj_a(const BasisPtr& b) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 1.0;
    return LinearOperator(b, m, "Pa");
}

// pre (|a>+|b>)/sqrt2, post (2|a>-|b>)/sqrt5, A = |a><a|  ->  A_w = 2.
PrePostEnsemble spectrum_exit_ensemble(const BasisPtr& b) {
    const StateVector pre = normalize(
        superpose({{1.0, basis_ket(b, {"a"})}, {1.0, basis_ket(b, {"b"})}}));
    const StateVector post = normalize(
        superpose({{2.0, basis_ket(b, {"a"})}, {-1.0, basis_ket(b, {"b"})}}));
    return PrePostEnsemble(pre, post);
}

// pre (|a>+|b>)/sqrt2, post (|a> + (-1+i)|b>)/sqrt3, A = |a><a|  ->  A_w = i.
PrePostEnsemble imaginary_unit_ensemble(const BasisPtr& b) {
    const StateVector pre = normalize(
        superpose({{1.0, basis_ket(b, {"a"})}, {1.0, basis_ket(b, {"b"})}}));
    const StateVector post = normalize(
        superpose({{1.0, basis_ket(b, {"a"})}, {Amplitude(-1.0, 1.0), basis_ket(b, {"b"})}}));
    return PrePostEnsemble(pre, post);
}

}  // namespace

TEST_CASE("gaussian pointer moments match the convention") {
    for (const double sigma : {0.5, 1.0, 2.0}) {
        const PointerState p = gaussian_pointer(sigma);
        CHECK(p.size() == 256);
        CHECK(p.span == doctest::Approx(16.0 * sigma));
        CHECK(p.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(p.mean_position()) <= 1e-10);
        CHECK(p.position_variance() == doctest::Approx(sigma * sigma).epsilon(1e-10));
        CHECK(std::abs(p.mean_momentum()) <= 1e-10);
        CHECK(p.momentum_variance() ==
              doctest::Approx(1.0 / (4.0 * sigma * sigma)).epsilon(1e-8));
    }
    // Explicit n and span are honored.
    const PointerState q = gaussian_pointer(1.0, 128, 12.0);
    CHECK(q.size() == 128);
    CHECK(q.dx == doctest::Approx(24.0 / 128));
}

TEST_CASE("grid parameters are validated") {
    CHECK_THROWS_WITH_AS(gaussian_pointer(0.0), doctest::Contains("invalid grid parameters"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(gaussian_pointer(-1.0), doctest::Contains("invalid grid parameters"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(gaussian_pointer(1.0, 100), doctest::Contains("power of two"),
                         std::invalid_argument);
    CHECK_THROWS_AS(gaussian_pointer(1.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_pointer(1.0, 1024), std::invalid_argument);
    CHECK_THROWS_WITH_AS(gaussian_pointer(1.0, 256, 4.0), doctest::Contains("8*sigma"),
                         std::invalid_argument);
}

TEST_CASE("grid overflow is rejected with a clear message") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e(basis_ket(b, {"a"}), basis_ket(b, {"a"}));
    const PointerState p = gaussian_pointer(1.0);  // span 16
    Eigen::Matrix2cd big = Eigen::Matrix2cd::Zero();
    big(0, 0) = 100.0;
    CHECK_THROWS_WITH_AS(couple_and_postselect(LinearOperator(b, big), e, p, 0.05),
                         doctest::Contains("pointer grid overflow"), std::invalid_argument);
    // Just inside the bound is fine.
    CHECK_NOTHROW(couple_and_postselect(LinearOperator(b, big), e, p, 0.039));
}

TEST_CASE("position shift reads the real part of the weak value") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = spectrum_exit_ensemble(b);
    const PointerState p = gaussian_pointer(1.0);
    const double g = 0.01;
    const CouplingResult r = couple_and_postselect(proj_a(b), e, p, g);
    CHECK(r.joint_norm_check == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.mean_position_shift / g == doctest::Approx(2.0).epsilon(1e-3));
    // Real weak value: no momentum kick.
    CHECK(std::abs(r.mean_momentum_shift) <= 1e-8);
}

TEST_CASE("momentum shift reads the imaginary part of the weak value") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = imaginary_unit_ensemble(b);
    const PointerState p = gaussian_pointer(1.0);
    const double g = 0.01;
    const CouplingResult r = couple_and_postselect(proj_a(b), e, p, g);
    const double predicted = 2.0 * g * p.momentum_variance();  // Im(A_w) = 1
    CHECK(r.mean_momentum_shift / predicted == doctest::Approx(1.0).epsilon(1e-2));
    // Re(A_w) = 0: position shift stays at second order.
    CHECK(std::abs(r.mean_position_shift) <= 5e-4);
}

TEST_CASE("success probability approaches the postselect probability as g shrinks") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = spectrum_exit_ensemble(b);
    const PointerState p = gaussian_pointer(1.0);
    const CouplingResult r = couple_and_postselect(proj_a(b), e, p, 1e-4);
    CHECK(r.success_prob == doctest::Approx(e.postselect_probability()).epsilon(1e-4));
}

TEST_CASE("orthogonal post-selection yields a null conditional pointer") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e(basis_ket(b, {"a"}), basis_ket(b, {"b"}));
    const PointerState p = gaussian_pointer(1.0);
    // A = identity shifts every branch identically, so <b|a> stays 0.
    const CouplingResult r = couple_and_postselect(LinearOperator::identity(b), e, p, 0.01);
    CHECK(r.success_prob <= 1e-24);
    CHECK(r.mean_position_shift == 0.0);
    CHECK(r.mean_momentum_shift == 0.0);
    CHECK(r.joint_norm_check == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coupling is unitary before post-selection for any g") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = imaginary_unit_ensemble(b);
    const PointerState p = gaussian_pointer(1.0);
    for (const double g : {0.001, 0.02, 0.3, 1.0}) {
        const CouplingResult r = couple_and_postselect(proj_a(b), e, p, g);
        CHECK(r.joint_norm_check == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("success probabilities over a complete post basis sum to one") {
    const BasisPtr b = two_level();
    const StateVector pre = normalize(
        superpose({{1.0, basis_ket(b, {"a"})}, {kI, basis_ket(b, {"b"})}}));
    const PointerState p = gaussian_pointer(1.0);
    for (const double g : {0.01, 0.3}) {
        double total = 0.0;
        for (const char* label : {"a", "b"}) {
            const PrePostEnsemble e(pre, basis_ket(b, {label}));
            total += couple_and_postselect(proj_a(b), e, p, g).success_prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("richardson extrapolation of shift/g recovers Re(A_w)") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = spectrum_exit_ensemble(b);
    const PointerState p = gaussian_pointer(1.0);
    const double r1 = couple_and_postselect(proj_a(b), e, p, 0.02).mean_position_shift / 0.02;
    const double r2 = couple_and_postselect(proj_a(b), e, p, 0.01).mean_position_shift / 0.01;
    const double r3 = couple_and_postselect(proj_a(b), e, p, 0.005).mean_position_shift / 0.005;
    // Leading corrections are O(g^2): one halving step cancels them.
    const double extrapolated = (4.0 * r3 - r2) / 3.0;
    CHECK(std::abs(extrapolated - 2.0) <= 1e-3);
    // And the raw ratios converge monotonically toward the weak value.
    CHECK(std::abs(r3 - 2.0) < std::abs(r1 - 2.0));
}

TEST_CASE("momentum readout is proportional across pointer widths") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = imaginary_unit_ensemble(b);
    double reference = 0.0;
    for (const double sigma : {0.5, 1.0, 2.0}) {
        const PointerState p = gaussian_pointer(sigma);
        const CouplingResult r = couple_and_postselect(proj_a(b), e, p, 0.005);
        const double ratio = r.mean_momentum_shift / (2.0 * 0.005 * p.momentum_variance());
        if (sigma == 0.5) {
            reference = ratio;
        } else {
            CHECK(ratio == doctest::Approx(reference).epsilon(0.02));
        }
    }
}

TEST_CASE("weak_limit_report tabulates shifts, predictions, and errors") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e = spectrum_exit_ensemble(b);
    const auto rows = weak_limit_report(proj_a(b), e, 1.0, {0.02, 0.01, 0.005});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].g == 0.02);
    CHECK(rows[2].g == 0.005);
    for (const auto& row : rows) {
        CHECK(row.predicted_position == doctest::Approx(row.g * 2.0));
        CHECK(std::abs(row.predicted_momentum) <= 1e-15);  // Im(A_w) = 0
        CHECK(std::abs(row.momentum_shift) <= 1e-8);
        CHECK(row.position_error == doctest::Approx(std::abs(row.position_shift - row.predicted_position)));
    }
    // Error columns shrink at least quadratically (>= 3.5x per halving).
    CHECK(rows[1].position_error <= rows[0].position_error / 3.5);
    CHECK(rows[2].position_error <= rows[1].position_error / 3.5);
    // Halving g halves the shift within 5%.
    CHECK(rows[1].position_shift == doctest::Approx(rows[0].position_shift / 2.0).epsilon(0.05));
    CHECK(rows[2].position_shift == doctest::Approx(rows[1].position_shift / 2.0).epsilon(0.05));
}

TEST_CASE("weak_limit_report propagates infeasible ensembles") {
    const BasisPtr b = two_level();
    const PrePostEnsemble e(basis_ket(b, {"a"}), basis_ket(b, {"b"}));
    CHECK_THROWS_WITH_AS((void)weak_limit_report(proj_a(b), e, 1.0, {0.01}),
                         doctest::Contains("post-selection impossible"), std::runtime_error);
}
