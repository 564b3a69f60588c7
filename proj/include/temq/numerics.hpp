// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace temq {

inline constexpr double kPi = 3.14159265358979323846;

/// Normalized sinc: sin(pi u)/(pi u), with sinc(0) = 1.
double sinc(double u);

/// Band-limited sinc: sin(omega_rad u)/(omega_rad u), value 1 at u = 0.
double sinc_omega(double omega_rad, double u);

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b] to the
/// given absolute tolerance.
double integrate_adaptive(const std::function<double(double)> &f, double a,
                          double b, double abs_tol);

} // namespace temq
