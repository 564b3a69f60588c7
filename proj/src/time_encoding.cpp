// SPDX-License-Identifier: Apache-2.0
#include "temq/time_encoding.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "temq/numerics.hpp"

namespace temq {

std::vector<double> FiringRecord::intervals() const {
    std::vector<double> diffs;
    diffs.reserve(times.size());
    double prev = start_time;
    for (double t : times) {
        diffs.push_back(t - prev);
        prev = t;
    }
    return diffs;
}

namespace {

// Locates all threshold crossings of the reset integrator over (t0, t_end].
// `integral(a, b)` must return the exact-enough integral of the input signal;
// `amp_bound` is a certified bound on |y| used to bracket each root.
FiringRecord encode_core(const std::function<double(double, double)> &integral,
                         double amp_bound, const TemParams &params, double t0,
                         double t_end) {
    if (!(params.kappa > 0.0) || !(params.delta > 0.0))
        throw std::invalid_argument("encode_iftem: kappa and delta must be positive");
    if (!(params.bias > amp_bound))
        throw std::invalid_argument(
            "encode_iftem: bias must exceed the signal amplitude bound");
    if (t_end < t0)
        throw std::invalid_argument("encode_iftem: t_end must not precede t0");

    const double kd = params.kappa * params.delta;
    const double b = params.bias;

    FiringRecord record;
    record.params = params;
    record.start_time = t0;

    double prev = t0;
    while (true) {
        double next;
        if (amp_bound == 0.0) {
            next = prev + kd / b;
        } else {
            double lo = prev + kd / (b + amp_bound);
            double hi = prev + kd / (b - amp_bound);
            // G(t) = integral of (b + y) from prev, minus the threshold;
            // strictly increasing since b > |y|.
            const auto g = [&](double t) {
                return b * (t - prev) + integral(prev, t) - kd;
            };
            if (g(lo) >= 0.0) {
                next = lo;
            } else if (g(hi) <= 0.0) {
                next = hi;
            } else {
                for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi)
                        break;
                    if (g(mid) < 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                next = 0.5 * (lo + hi);
            }
        }
        if (next > t_end)
            break;
        record.times.push_back(next);
        prev = next;
    }
    return record;
}

} // namespace

FiringRecord encode_iftem(const TrigPolynomial &y, const TemParams &params,
                          double t0, double t_end) {
    const double bound = sup_bound(y);
    return encode_core(
        [&y](double a, double b) { return integrate_trig(y, a, b); }, bound,
        params, t0, t_end);
}

FiringRecord encode_iftem_bl(const BlSignal &x, double amplitude_bound,
                             const TemParams &params, double t0, double t_end) {
    if (!(amplitude_bound >= 0.0))
        throw std::invalid_argument("encode_iftem_bl: bound must be nonnegative");
    const auto integral = [&x](double a, double b) {
        return integrate_adaptive([&x](double t) { return eval_bl(x, t); }, a, b,
                                  1e-13);
    };
    return encode_core(integral, amplitude_bound, params, t0, t_end);
}

std::vector<double> sample_classical(const TrigPolynomial &y, double ts,
                                     std::size_t n, double t0) {
    if (!(ts > 0.0))
        throw std::invalid_argument("sample_classical: ts must be positive");
    if (n < 1)
        throw std::invalid_argument("sample_classical: need at least one sample");
    std::vector<double> samples(n);
    for (std::size_t m = 0; m < n; ++m)
        samples[m] = y.eval(t0 + static_cast<double>(m) * ts);
    return samples;
}

IntervalBounds interval_bounds(const TemParams &params,
                               const AmplitudeBound &c) {
    if (!(params.bias > c.value))
        throw std::invalid_argument("interval_bounds: bias must exceed c");
    const double kd = params.kappa * params.delta;
    return {kd / (params.bias + c.value), kd / (params.bias - c.value)};
}

bool feasible_fri(const TemParams &params, const AmplitudeBound &c,
                  std::size_t pulse_count, double period) {
    if (!(params.bias > c.value))
        throw std::invalid_argument("feasible_fri: bias must exceed c");
    const double rate = (params.bias - c.value) / (params.kappa * params.delta);
    return rate >= (2.0 * static_cast<double>(pulse_count) + 2.0) / period;
}

bool feasible_bl(const TemParams &params, const AmplitudeBound &c,
                 double band_limit_hz) {
    if (!(params.bias > c.value))
        throw std::invalid_argument("feasible_bl: bias must exceed c");
    const double dt_max =
        params.kappa * params.delta / (params.bias - c.value);
    const double omega_rad = 2.0 * kPi * band_limit_hz;
    return dt_max < kPi / omega_rad;
}

} // namespace temq
