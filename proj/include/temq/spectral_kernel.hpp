// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "temq/signal_models.hpp"

namespace temq {

/// Sum-of-sincs sampling kernel, represented by its action on Fourier-series
/// coefficients: a symmetric contiguous index set {-k_max..k_max} with
/// per-index complex gains. The time-domain impulse response is
/// (1/T) sum_k b_k exp(j k w0 t) restricted to one period.
struct SosKernel {
    int k_max;
    double period;
    std::vector<std::complex<double>> gains; // index k + k_max

    static SosKernel flat(int k_max, double period);
    /// IF-TEM FRI recovery needs 2L+2 coefficients; smallest symmetric set
    /// is {-(L+1)..L+1}.
    static SosKernel for_iftem_fri(std::size_t pulse_count, double period);
    /// Classical FRI recovery needs 2L; smallest symmetric set is {-L..L}.
    static SosKernel for_classical_fri(std::size_t pulse_count, double period);

    std::size_t size() const { return gains.size(); }
    std::complex<double> gain(int k) const;

    /// Certified bound on ||g||_inf: (1/T) sum_k |b_k|, attained at t = 0
    /// for flat gains.
    double impulse_sup_bound() const;
};

/// Real T-periodic trigonometric polynomial y(t) = sum_k Y[k] exp(j k w0 t)
/// on a finite symmetric index set.
class TrigPolynomial {
public:
    TrigPolynomial(double period, std::vector<std::complex<double>> coeffs);
    static TrigPolynomial zero(double period);

    double period() const { return period_; }
    double omega0() const;
    int k_max() const { return k_max_; }

    /// Y[k]; zero outside the stored index set.
    std::complex<double> coeff(int k) const;

    double eval(double t) const;

private:
    double period_;
    int k_max_;
    std::vector<std::complex<double>> coeffs_; // index k + k_max
};

/// Applies the kernel in the FSC domain: Y[k] = b_k X[k] on the index set.
TrigPolynomial filter_fri(const FriSignal &signal, const SosKernel &kernel);

/// Exact closed-form integral of y over [t_a, t_b].
double integrate_trig(const TrigPolynomial &y, double t_a, double t_b);

/// Certified upper bound on max_t |y(t)|: sum_k |Y[k]|.
double sup_bound(const TrigPolynomial &y);

} // namespace temq
