// SPDX-License-Identifier: Apache-2.0
#include "temq/signal_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "temq/errors.hpp"
#include "temq/numerics.hpp"

namespace temq {

PulseShape PulseShape::dirac() { return PulseShape(PulseKind::Dirac, 0.0); }

PulseShape PulseShape::gaussian(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("PulseShape: gaussian width must be positive");
    return PulseShape(PulseKind::Gaussian, sigma);
}

std::complex<double> PulseShape::spectrum(double omega) const {
    if (kind_ == PulseKind::Dirac)
        return {1.0, 0.0};
    // h(t) = exp(-t^2 / (2 sigma^2))  ->  H(w) = sigma sqrt(2 pi) exp(-sigma^2 w^2 / 2)
    const double s2 = sigma_ * sigma_;
    return {sigma_ * std::sqrt(2.0 * kPi) * std::exp(-0.5 * s2 * omega * omega),
            0.0};
}

double PulseShape::l1_norm() const {
    if (kind_ == PulseKind::Dirac)
        return 1.0;
    return sigma_ * std::sqrt(2.0 * kPi);
}

double PulseShape::eval_time(double t) const {
    if (kind_ == PulseKind::Dirac)
        throw std::logic_error("PulseShape: Dirac pulses have no pointwise value");
    return std::exp(-0.5 * t * t / (sigma_ * sigma_));
}

double FriSignal::omega0() const { return 2.0 * kPi / period; }

FriSignal make_fri_signal(std::vector<double> amplitudes,
                          std::vector<double> delays, double period,
                          PulseShape pulse) {
    if (!(period > 0.0))
        throw std::invalid_argument("make_fri_signal: period must be positive");
    if (amplitudes.empty())
        throw std::invalid_argument("make_fri_signal: at least one pulse required");
    if (amplitudes.size() != delays.size())
        throw std::invalid_argument(
            "make_fri_signal: amplitude/delay length mismatch");
    for (double tau : delays) {
        if (!(tau > 0.0) || tau > period)
            throw std::invalid_argument(
                "make_fri_signal: delay outside (0, period]");
    }
    std::vector<double> sorted = delays;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("make_fri_signal: duplicate delays");
    return FriSignal{period, std::move(amplitudes), std::move(delays), pulse};
}

std::complex<double> fri_fsc(const FriSignal &signal, int k) {
    const double w0 = signal.omega0();
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t l = 0; l < signal.pulse_count(); ++l) {
        const double phase = -k * w0 * signal.delays[l];
        sum += signal.amplitudes[l] *
               std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return signal.pulse.spectrum(k * w0) * sum / signal.period;
}

double eval_fri(const FriSignal &signal, double t, int truncation) {
    if (truncation < 1)
        throw std::invalid_argument("eval_fri: truncation must be >= 1");
    const double w0 = signal.omega0();
    // X[-k] = conj(X[k]) for real amplitudes, so fold the sum.
    double value = fri_fsc(signal, 0).real();
    for (int k = 1; k <= truncation; ++k) {
        const std::complex<double> xk = fri_fsc(signal, k);
        value += 2.0 * (xk.real() * std::cos(k * w0 * t) -
                        xk.imag() * std::sin(k * w0 * t));
    }
    return value;
}

BlSignal make_bl_signal(std::vector<double> coeffs, double band_limit_hz,
                        double energy_bound) {
    if (coeffs.empty())
        throw std::invalid_argument("make_bl_signal: coefficient list is empty");
    if (!(band_limit_hz > 0.0))
        throw std::invalid_argument("make_bl_signal: band limit must be positive");
    if (!(energy_bound > 0.0))
        throw std::invalid_argument("make_bl_signal: energy bound must be positive");

    BlSignal signal{std::move(coeffs), band_limit_hz, energy_bound};
    const double bound = bl_amplitude_bound(energy_bound, band_limit_hz).value;

    // Peak search on a dense grid over the coefficient support plus tails.
    const double ts = signal.ts();
    const int half = signal.half_width();
    const double lo = -(half + 4) * ts;
    const double hi = (half + 4) * ts;
    const int per_sample = 64;
    const std::size_t n = static_cast<std::size_t>(per_sample) *
                          (2 * static_cast<std::size_t>(half) + 8);
    double peak = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(n);
        peak = std::max(peak, std::abs(eval_bl(signal, t)));
    }
    if (peak > bound)
        throw amplitude_bound_error("make_bl_signal: amplitude exceeds energy bound");
    return signal;
}

double eval_bl(const BlSignal &signal, double t) {
    const double ts = signal.ts();
    const int half = signal.half_width();
    double value = 0.0;
    for (std::size_t i = 0; i < signal.coeffs.size(); ++i) {
        const int n = static_cast<int>(i) - half;
        value += signal.coeffs[i] * sinc((t - n * ts) / ts);
    }
    return value;
}

AmplitudeBound fri_amplitude_bound(std::size_t pulse_count, double a_max,
                                   double g_sup, double h_l1) {
    if (pulse_count == 0 || !(a_max > 0.0) || !(g_sup > 0.0) || !(h_l1 > 0.0))
        throw std::invalid_argument(
            "fri_amplitude_bound: all arguments must be positive");
    return {static_cast<double>(pulse_count) * a_max * g_sup * h_l1,
            BoundProvenance::Fri};
}

AmplitudeBound bl_amplitude_bound(double energy, double band_limit_hz) {
    if (!(energy > 0.0) || !(band_limit_hz > 0.0))
        throw std::invalid_argument(
            "bl_amplitude_bound: all arguments must be positive");
    const double omega_rad = 2.0 * kPi * band_limit_hz;
    return {std::sqrt(energy * omega_rad / kPi), BoundProvenance::BlEnergy};
}

} // namespace temq
