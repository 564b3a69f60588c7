// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "temq/signal_models.hpp"
#include "temq/spectral_kernel.hpp"

namespace temq {

/// Integrate-and-fire parameters: bias b, integrator scale kappa,
/// threshold delta. Requires bias > amplitude bound of the input.
struct TemParams {
    double bias;
    double kappa;
    double delta;
};

/// IF-TEM output: strictly increasing firing instants, with the integration
/// origin kept so the first interval is t_1 - t_0 like any other.
struct FiringRecord {
    std::vector<double> times;
    TemParams params;
    double start_time = 0.0;

    /// Consecutive differences T_n, the first taken against start_time.
    std::vector<double> intervals() const;
};

/// Encodes a trigonometric polynomial into firing instants over (t0, t_end].
/// Each firing is the root of the reset-integrator threshold equation,
/// bracketed by the interval bounds and bisected to ~1e-14 s.
FiringRecord encode_iftem(const TrigPolynomial &y, const TemParams &params,
                          double t0, double t_end);

/// Same encoder for a BL signal fed directly (no kernel); per-step integrals
/// use Gauss-Kronrod quadrature instead of the trig closed form.
FiringRecord encode_iftem_bl(const BlSignal &x, double amplitude_bound,
                             const TemParams &params, double t0, double t_end);

/// Instantaneous samples y(t0 + m ts) for m = 0..n-1.
std::vector<double> sample_classical(const TrigPolynomial &y, double ts,
                                     std::size_t n, double t0);

struct IntervalBounds {
    double dt_min;
    double dt_max;
};

/// Hard bounds on consecutive firing differences:
/// kappa delta / (b + c) <= T_n <= kappa delta / (b - c).
IntervalBounds interval_bounds(const TemParams &params,
                               const AmplitudeBound &c);

/// FRI perfect-recovery condition: 1/dt_max >= (2L + 2)/T (inclusive).
bool feasible_fri(const TemParams &params, const AmplitudeBound &c,
                  std::size_t pulse_count, double period);

/// BL perfect-recovery condition: dt_max < pi / omega_rad (strict).
bool feasible_bl(const TemParams &params, const AmplitudeBound &c,
                 double band_limit_hz);

} // namespace temq
