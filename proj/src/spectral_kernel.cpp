// SPDX-License-Identifier: Apache-2.0
#include "temq/spectral_kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "temq/numerics.hpp"

namespace temq {

SosKernel SosKernel::flat(int k_max, double period) {
    if (k_max < 0)
        throw std::invalid_argument("SosKernel: k_max must be nonnegative");
    if (!(period > 0.0))
        throw std::invalid_argument("SosKernel: period must be positive");
    return SosKernel{k_max, period,
                     std::vector<std::complex<double>>(2 * k_max + 1,
                                                       {1.0, 0.0})};
}

SosKernel SosKernel::for_iftem_fri(std::size_t pulse_count, double period) {
    return flat(static_cast<int>(pulse_count) + 1, period);
}

SosKernel SosKernel::for_classical_fri(std::size_t pulse_count, double period) {
    return flat(static_cast<int>(pulse_count), period);
}

std::complex<double> SosKernel::gain(int k) const {
    if (k < -k_max || k > k_max)
        return {0.0, 0.0};
    return gains[static_cast<std::size_t>(k + k_max)];
}

double SosKernel::impulse_sup_bound() const {
    double sum = 0.0;
    for (const auto &g : gains)
        sum += std::abs(g);
    return sum / period;
}

TrigPolynomial::TrigPolynomial(double period,
                               std::vector<std::complex<double>> coeffs)
    : period_(period), coeffs_(std::move(coeffs)) {
    if (!(period_ > 0.0))
        throw std::invalid_argument("TrigPolynomial: period must be positive");
    if (coeffs_.empty() || coeffs_.size() % 2 == 0)
        throw std::invalid_argument(
            "TrigPolynomial: coefficient count must be odd (symmetric index set)");
    k_max_ = static_cast<int>(coeffs_.size() / 2);
}

TrigPolynomial TrigPolynomial::zero(double period) {
    return TrigPolynomial(period, {{0.0, 0.0}});
}

double TrigPolynomial::omega0() const { return 2.0 * kPi / period_; }

std::complex<double> TrigPolynomial::coeff(int k) const {
    if (k < -k_max_ || k > k_max_)
        return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(k + k_max_)];
}

double TrigPolynomial::eval(double t) const {
    const double w0 = omega0();
    double value = coeff(0).real();
    for (int k = 1; k <= k_max_; ++k) {
        const std::complex<double> pos = coeff(k);
        const std::complex<double> neg = coeff(-k);
        const double c = std::cos(k * w0 * t);
        const double s = std::sin(k * w0 * t);
        value += (pos.real() + neg.real()) * c - (pos.imag() - neg.imag()) * s;
    }
    return value;
}

TrigPolynomial filter_fri(const FriSignal &signal, const SosKernel &kernel) {
    if (signal.period != kernel.period)
        throw std::invalid_argument("filter_fri: kernel/signal period mismatch");
    std::vector<std::complex<double>> coeffs(kernel.size());
    for (int k = -kernel.k_max; k <= kernel.k_max; ++k)
        coeffs[static_cast<std::size_t>(k + kernel.k_max)] =
            kernel.gain(k) * fri_fsc(signal, k);
    return TrigPolynomial(signal.period, std::move(coeffs));
}

double integrate_trig(const TrigPolynomial &y, double t_a, double t_b) {
    if (t_a > t_b)
        throw std::invalid_argument("integrate_trig: t_a must not exceed t_b");
    const double w0 = y.omega0();
    std::complex<double> total = y.coeff(0) * (t_b - t_a);
    for (int k = -y.k_max(); k <= y.k_max(); ++k) {
        if (k == 0)
            continue;
        const std::complex<double> yk = y.coeff(k);
        if (yk == std::complex<double>{0.0, 0.0})
            continue;
        const std::complex<double> jkw{0.0, k * w0};
        const std::complex<double> eb{std::cos(k * w0 * t_b),
                                      std::sin(k * w0 * t_b)};
        const std::complex<double> ea{std::cos(k * w0 * t_a),
                                      std::sin(k * w0 * t_a)};
        total += yk * (eb - ea) / jkw;
    }
    return total.real();
}

double sup_bound(const TrigPolynomial &y) {
    double sum = 0.0;
    for (int k = -y.k_max(); k <= y.k_max(); ++k)
        sum += std::abs(y.coeff(k));
    return sum;
}

} // namespace temq
