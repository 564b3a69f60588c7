// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations, kept independent of the library's own
// numerical paths: adaptive Simpson instead of Gauss-Kronrod, direct
// summation instead of closed forms.
#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "temq/signal_models.hpp"

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

inline double simpson_rec(const std::function<double(double)> &f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

/// Adaptive Simpson quadrature (independent of the library's GK15 rule).
/// The interval is pre-split so narrow or oscillatory features cannot hide
/// from the initial three-point probe.
inline double integrate(const std::function<double(double)> &f, double a,
                        double b, double tol) {
    if (a == b)
        return 0.0;
    const int panels = 32;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = i + 1 == panels ? b : lo + h;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, lo, hi, fa, fm, fb, whole, tol / panels, 0);
    }
    return total;
}

inline std::complex<double>
integrate_complex(const std::function<std::complex<double>(double)> &f,
                  double a, double b, double tol) {
    const double re =
        integrate([&f](double t) { return f(t).real(); }, a, b, tol);
    const double im =
        integrate([&f](double t) { return f(t).imag(); }, a, b, tol);
    return {re, im};
}

/// Time-domain value of a periodized Gaussian-pulse FRI signal, summing
/// enough period images for the tails to vanish.
inline double eval_fri_gaussian_time(const temq::FriSignal &signal, double t,
                                     int images = 6) {
    double value = 0.0;
    for (int p = -images; p <= images; ++p)
        for (std::size_t l = 0; l < signal.pulse_count(); ++l)
            value += signal.amplitudes[l] *
                     signal.pulse.eval_time(t - signal.delays[l] -
                                            p * signal.period);
    return value;
}

/// Fourier-series coefficient of the periodized signal by direct quadrature
/// of (1/T) integral over one period of x(t) exp(-j k w0 t).
inline std::complex<double> fsc_by_quadrature(const temq::FriSignal &signal,
                                              int k, double tol = 1e-12) {
    const double w0 = 2.0 * kPi / signal.period;
    const auto f = [&](double t) {
        const double x = eval_fri_gaussian_time(signal, t);
        return x * std::complex<double>(std::cos(k * w0 * t),
                                        -std::sin(k * w0 * t));
    };
    return integrate_complex(f, 0.0, signal.period, tol) / signal.period;
}

/// One period of the flat sum-of-sincs impulse response:
/// g(t) = (1/T) sum_{|k| <= K} exp(j k w0 t), the Dirichlet kernel.
inline double dirichlet_kernel(int k_max, double period, double t) {
    const double w0 = 2.0 * kPi / period;
    double value = 1.0;
    for (int k = 1; k <= k_max; ++k)
        value += 2.0 * std::cos(k * w0 * t);
    return value / period;
}

} // namespace oracles
