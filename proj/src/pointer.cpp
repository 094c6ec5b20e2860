#include "weakcat/pointer.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakcat {

namespace {

Eigen::VectorXcd fft(const Eigen::VectorXcd& in, int direction) {
    const int n = static_cast<int>(in.size());
    Eigen::VectorXcd out(n);
    // FFTW guarantees fftw_complex and std::complex<double> share layout, but
    // copies through local buffers keep the plan independent of Eigen storage.
    fftw_complex* buf_in = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_complex* buf_out = fftw_alloc_complex(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        buf_in[i][0] = in(i).real();
        buf_in[i][1] = in(i).imag();
    }
    fftw_plan plan = fftw_plan_dft_1d(n, buf_in, buf_out, direction, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    for (int i = 0; i < n; ++i) {
        out(i) = Amplitude(buf_out[i][0], buf_out[i][1]);
    }
    fftw_free(buf_in);
    fftw_free(buf_out);
    if (direction == FFTW_BACKWARD) out /= static_cast<double>(n);
    return out;
}

// Momentum of FFT bin j on a grid with spacing dx (signed convention).
double momentum_of_bin(std::size_t j, std::size_t n, double dx) {
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    auto sj = static_cast<std::ptrdiff_t>(j);
    if (sj >= half) sj -= static_cast<std::ptrdiff_t>(n);
    return 2.0 * std::numbers::pi * static_cast<double>(sj) / (static_cast<double>(n) * dx);
}

// Exact periodic translation by s: multiply by exp(-i p s) in momentum space.
Eigen::VectorXcd translate(const Eigen::VectorXcd& amps, double dx, double s) {
    Eigen::VectorXcd hat = fft(amps, FFTW_FORWARD);
    const std::size_t n = static_cast<std::size_t>(amps.size());
    for (std::size_t j = 0; j < n; ++j) {
        const double p = momentum_of_bin(j, n, dx);
        hat(static_cast<Eigen::Index>(j)) *= std::exp(Amplitude(0.0, -p * s));
    }
    return fft(hat, FFTW_BACKWARD);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

double PointerState::norm_squared() const { return amps.squaredNorm() * dx; }

double PointerState::mean_position() const {
    double weight = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < size(); ++k) {
        const double w = std::norm(amps(static_cast<Eigen::Index>(k)));
        weight += w;
        sum += w * position(k);
    }
    if (weight <= 0.0) throw std::runtime_error("pointer state is null");
    return sum / weight;
}

double PointerState::position_variance() const {
    const double mu = mean_position();
    double weight = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < size(); ++k) {
        const double w = std::norm(amps(static_cast<Eigen::Index>(k)));
        const double d = position(k) - mu;
        weight += w;
        sum += w * d * d;
    }
    return sum / weight;
}

double PointerState::mean_momentum() const {
    const Eigen::VectorXcd hat = fft(amps, FFTW_FORWARD);
    double weight = 0.0, sum = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
        const double w = std::norm(hat(static_cast<Eigen::Index>(j)));
        weight += w;
        sum += w * momentum_of_bin(j, size(), dx);
    }
    if (weight <= 0.0) throw std::runtime_error("pointer state is null");
    return sum / weight;
}

double PointerState::momentum_variance() const {
    const Eigen::VectorXcd hat = fft(amps, FFTW_FORWARD);
    const std::size_t n = size();
    double weight = 0.0, mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::norm(hat(static_cast<Eigen::Index>(j)));
        weight += w;
        mean += w * momentum_of_bin(j, n, dx);
    }
    if (weight <= 0.0) throw std::runtime_error("pointer state is null");
    mean /= weight;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::norm(hat(static_cast<Eigen::Index>(j)));
        const double d = momentum_of_bin(j, n, dx) - mean;
        sum += w * d * d;
    }
    return sum / weight;
}

PointerState gaussian_pointer(double sigma, std::size_t n, double span) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("invalid grid parameters: sigma must be positive");
    }
    if (span == 0.0) span = 16.0 * sigma;
    if (!is_power_of_two(n) || n < 64 || n > 512) {
        throw std::invalid_argument("invalid grid parameters: n must be a power of two in [64, 512]");
    }
    if (!(span >= 8.0 * sigma) || !std::isfinite(span)) {
        throw std::invalid_argument("invalid grid parameters: span must be at least 8*sigma");
    }

    PointerState ptr;
    ptr.sigma = sigma;
    ptr.span = span;
    ptr.dx = 2.0 * span / static_cast<double>(n);
    ptr.amps.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double x = ptr.position(k);
        ptr.amps(static_cast<Eigen::Index>(k)) = std::exp(-x * x / (4.0 * sigma * sigma));
    }
    ptr.amps /= std::sqrt(ptr.amps.squaredNorm() * ptr.dx);
    return ptr;
}

CouplingResult couple_and_postselect(const LinearOperator& a, const PrePostEnsemble& ensemble,
                                     const PointerState& pointer, double g) {
    if (!same_basis(a.basis(), ensemble.pre().basis())) {
        throw std::invalid_argument("observable basis does not match the ensemble");
    }
    if (!std::isfinite(g)) {
        throw std::invalid_argument("coupling strength must be finite");
    }
    const auto branches = hermitian_branches(a);

    double max_kick = 0.0;
    for (const auto& b : branches) max_kick = std::max(max_kick, std::abs(g * b.eigenvalue));
    if (max_kick > pointer.span / 4.0) {
        throw std::invalid_argument("pointer grid overflow: max|g*lambda| exceeds span/4");
    }

    const Eigen::Index dim = static_cast<Eigen::Index>(ensemble.pre().dimension());
    const Eigen::Index n = pointer.amps.size();

    // Joint state after the impulsive coupling: rows index the system basis,
    // columns the pointer grid.
    Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(dim, n);
    for (const auto& branch : branches) {
        const Eigen::VectorXcd sys_part = branch.projector * ensemble.evolved_pre().amplitudes();
        if (sys_part.squaredNorm() < 1e-30) continue;
        const Eigen::VectorXcd shifted = translate(pointer.amps, pointer.dx, g * branch.eigenvalue);
        joint += sys_part * shifted.transpose();
    }

    CouplingResult result;
    result.g = g;
    result.joint_norm_check = joint.squaredNorm() * pointer.dx;

    PointerState conditional = pointer;
    conditional.amps = (ensemble.post().amplitudes().adjoint() * joint).transpose();
    result.success_prob = conditional.norm_squared();

    if (result.success_prob < 1e-24) {
        return result;  // conditional state is null; shifts stay 0
    }
    result.mean_position_shift = conditional.mean_position() - pointer.mean_position();
    result.mean_momentum_shift = conditional.mean_momentum() - pointer.mean_momentum();
    return result;
}

std::vector<WeakLimitRow> weak_limit_report(const LinearOperator& a, const PrePostEnsemble& ensemble,
                                            double sigma, const std::vector<double>& couplings) {
    const PointerState pointer = gaussian_pointer(sigma);
    const Amplitude aw = weak_value(a, ensemble).value;
    const double var_p = pointer.momentum_variance();

    std::vector<WeakLimitRow> rows;
    rows.reserve(couplings.size());
    for (double g : couplings) {
        const CouplingResult c = couple_and_postselect(a, ensemble, pointer, g);
        WeakLimitRow row;
        row.g = g;
        row.position_shift = c.mean_position_shift;
        row.momentum_shift = c.mean_momentum_shift;
        row.predicted_position = g * aw.real();
        row.predicted_momentum = 2.0 * g * var_p * aw.imag();
        row.position_error = std::abs(row.position_shift - row.predicted_position);
        row.momentum_error = std::abs(row.momentum_shift - row.predicted_momentum);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace weakcat
