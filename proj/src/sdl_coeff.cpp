#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "weakcat/sdl.hpp"

namespace weakcat::sdl {

namespace {

constexpr long long kMaxMagnitude = 1LL << 62;
constexpr long long kMaxLiteralRoot = 1'000'000;

std::optional<long long> checked_mul(long long a, long long b) {
    const __int128 p = static_cast<__int128>(a) * b;
    if (p > kMaxMagnitude || p < -static_cast<__int128>(kMaxMagnitude)) return std::nullopt;
    return static_cast<long long>(p);
}

// a*b + c*d with overflow check.
std::optional<long long> checked_mul_add(long long a, long long b, long long c, long long d) {
    const __int128 s = static_cast<__int128>(a) * b + static_cast<__int128>(c) * d;
    if (s > kMaxMagnitude || s < -static_cast<__int128>(kMaxMagnitude)) return std::nullopt;
    return static_cast<long long>(s);
}

// Addition of two exact reals; fails when the roots differ.
std::optional<ExactReal> er_add(const ExactReal& a, const ExactReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.root != b.root) return std::nullopt;
    const auto num = checked_mul_add(a.num, b.den, b.num, a.den);
    const auto den = checked_mul(a.den, b.den);
    if (!num || !den) return std::nullopt;
    return ExactReal::make(*num, *den, a.root);
}

std::optional<ExactReal> er_mul(const ExactReal& a, const ExactReal& b) {
    if (a.is_zero() || b.is_zero()) return ExactReal{};
    // Both roots are squarefree, so their common factor comes out whole and
    // the remaining product is squarefree again.
    const long long g = std::gcd(a.root, b.root);
    const auto root = checked_mul(a.root / g, b.root / g);
    const auto num = checked_mul(a.num, b.num);
    if (!root || !num) return std::nullopt;
    const auto num2 = checked_mul(*num, g);
    const auto den = checked_mul(a.den, b.den);
    if (!num2 || !den) return std::nullopt;

    ExactReal out;
    out.num = *num2;
    out.den = *den;
    out.root = *root;
    const long long r = std::gcd(out.num < 0 ? -out.num : out.num, out.den);
    out.num /= r;
    out.den /= r;
    if (out.root == 1 || out.num == 0) {
        if (out.num == 0) return ExactReal{};
        out.root = 1;
    }
    return out;
}

// 1 / (q * sqrt(n)) = (1/(q n)) * sqrt(n)
std::optional<ExactReal> er_inverse(const ExactReal& a) {
    if (a.is_zero()) return std::nullopt;
    const auto den = checked_mul(a.num, a.root);
    if (!den) return std::nullopt;
    return ExactReal::make(a.den, *den, a.root);
}

ExactReal er_neg(const ExactReal& a) {
    ExactReal out = a;
    out.num = -out.num;
    return out;
}

bool finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

}  // namespace

double ExactReal::value() const {
    double v = static_cast<double>(num) / static_cast<double>(den);
    if (root != 1) v *= std::sqrt(static_cast<double>(root));
    return v;
}

std::optional<ExactReal> ExactReal::make(long long num, long long den, long long root) {
    if (den == 0 || root < 0 || root > kMaxLiteralRoot) return std::nullopt;
    if (num == 0 || root == 0) return ExactReal{};
    if (den < 0) {
        num = -num;
        den = -den;
    }
    // Pull square factors out of the root.
    for (long long p = 2; p * p <= root; ++p) {
        while (root % (p * p) == 0) {
            root /= p * p;
            const auto n = checked_mul(num, p);
            if (!n) return std::nullopt;
            num = *n;
        }
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    num /= g;
    den /= g;
    if (num > kMaxMagnitude || num < -kMaxMagnitude || den > kMaxMagnitude) return std::nullopt;
    return ExactReal{num, den, root};
}

Coeff Coeff::exact(ExactReal re, ExactReal im) {
    Coeff c;
    c.exact_ = true;
    c.re_ = re;
    c.im_ = im;
    return c;
}

Coeff Coeff::integer(long long n) {
    return exact(ExactReal{n, 1, 1});
}

Coeff Coeff::approx(std::complex<double> v) {
    Coeff c;
    c.exact_ = false;
    // Normalize signed zeros so serialize/parse round-trips are bit-stable:
    // the text form cannot distinguish -0.0 from 0.0.
    c.approx_ = {v.real() == 0.0 ? 0.0 : v.real(), v.imag() == 0.0 ? 0.0 : v.imag()};
    return c;
}

std::complex<double> Coeff::value() const {
    if (!exact_) return approx_;
    return {re_.value(), im_.value()};
}

bool Coeff::is_zero() const {
    if (exact_) return re_.is_zero() && im_.is_zero();
    return approx_.real() == 0.0 && approx_.imag() == 0.0;
}

Coeff operator+(const Coeff& a, const Coeff& b) {
    if (a.exact_ && b.exact_) {
        const auto re = er_add(a.re_, b.re_);
        const auto im = er_add(a.im_, b.im_);
        if (re && im) return Coeff::exact(*re, *im);
    }
    return Coeff::approx(a.value() + b.value());
}

Coeff operator-(const Coeff& a, const Coeff& b) {
    return a + (-b);
}

Coeff operator*(const Coeff& a, const Coeff& b) {
    if (a.exact_ && b.exact_) {
        const auto ac = er_mul(a.re_, b.re_);
        const auto bd = er_mul(a.im_, b.im_);
        const auto ad = er_mul(a.re_, b.im_);
        const auto bc = er_mul(a.im_, b.re_);
        if (ac && bd && ad && bc) {
            const auto re = er_add(*ac, er_neg(*bd));
            const auto im = er_add(*ad, *bc);
            if (re && im) return Coeff::exact(*re, *im);
        }
    }
    return Coeff::approx(a.value() * b.value());
}

Coeff operator/(const Coeff& a, const Coeff& b) {
    if (a.exact_ && b.exact_) {
        if (b.im_.is_zero()) {
            const auto inv = er_inverse(b.re_);
            if (inv) {
                const auto re = er_mul(a.re_, *inv);
                const auto im = er_mul(a.im_, *inv);
                if (re && im) return Coeff::exact(*re, *im);
            }
        } else {
            // 1/(c + d i) = (c - d i) / (c^2 + d^2); the denominator is
            // rational because squaring clears the roots.
            const auto c2 = er_mul(b.re_, b.re_);
            const auto d2 = er_mul(b.im_, b.im_);
            if (c2 && d2) {
                const auto denom = er_add(*c2, *d2);
                if (denom) {
                    const Coeff conj = Coeff::exact(b.re_, er_neg(b.im_));
                    const Coeff num = a * conj;
                    if (num.exact_) {
                        const auto inv = er_inverse(*denom);
                        if (inv) {
                            const auto re = er_mul(num.re_, *inv);
                            const auto im = er_mul(num.im_, *inv);
                            if (re && im) return Coeff::exact(*re, *im);
                        }
                    }
                }
            }
        }
    }
    return Coeff::approx(a.value() / b.value());
}

Coeff Coeff::operator-() const {
    if (exact_) return Coeff::exact(er_neg(re_), er_neg(im_));
    return Coeff::approx(-approx_);
}

bool Coeff::operator==(const Coeff& other) const {
    if (exact_ != other.exact_) return false;
    if (exact_) return re_ == other.re_ && im_ == other.im_;
    return std::bit_cast<std::uint64_t>(approx_.real()) == std::bit_cast<std::uint64_t>(other.approx_.real()) &&
           std::bit_cast<std::uint64_t>(approx_.imag()) == std::bit_cast<std::uint64_t>(other.approx_.imag());
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Diagnostic::Severity::Error) return true;
    }
    return false;
}

// value() finiteness guard used by the parser (kept here with the rest of
// the numeric code).
bool coeff_finite(const Coeff& c) {
    return finite(c.value());
}

}  // namespace weakcat::sdl
