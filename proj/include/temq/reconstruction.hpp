// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "temq/signal_models.hpp"
#include "temq/spectral_kernel.hpp"
#include "temq/time_encoding.hpp"

namespace temq {

/// Least-squares FSC estimate on a symmetric index set, with the solve's
/// residual norm and condition number attached.
struct FscEstimate {
    int k_max;
    double period;
    std::vector<std::complex<double>> coefficients; // index k + k_max
    double residual;
    double condition;
    bool ill_conditioned; // condition > 1e12; warning, not fatal

    std::complex<double> coeff(int k) const;
};

/// Recovers the kernel-passband FSCs from (possibly quantized) firing times:
/// measurements y_n = -b T_n + kappa delta against rows of closed-form
/// exponential integrals over [t_n, t_n+1].
FscEstimate fsc_from_iftem(const FiringRecord &record, const SosKernel &kernel);

/// Recovers FSCs from uniform samples y(m ts), m = 0..N-1, taken from t = 0.
/// Reduces to a scaled DFT when N ts spans exactly one period.
FscEstimate fsc_from_classical(const std::vector<double> &samples,
                               const SosKernel &kernel, double ts);

enum class FriMethod { Omp, AnnihilatingFilter };

struct FriEstimate {
    std::vector<double> amplitudes;
    std::vector<double> delays; // sorted ascending, in (0, T]
    FriMethod method;
};

/// Orthogonal matching pursuit over delay atoms exp(-j k w0 tau) on a uniform
/// grid of (0, T], greedy selection with a full least-squares re-fit per
/// iteration.
FriEstimate estimate_fri_omp(const FscEstimate &fsc, std::size_t pulse_count,
                             const PulseShape &pulse, double period,
                             double grid_step);

/// Annihilating-filter estimator: null vector of the Toeplitz system of
/// demodulated coefficients, roots mapped to delays, amplitudes by least
/// squares. Grid-free.
FriEstimate estimate_fri_af(const FscEstimate &fsc, std::size_t pulse_count,
                            const PulseShape &pulse, double period);

/// Finite expansion over band-limited sinc atoms; the continuous-signal
/// handle returned by the BL reconstructions.
struct SincExpansion {
    double omega_rad;
    std::vector<double> anchors;
    std::vector<double> weights;
    bool feasibility_warning = false;

    double eval(double t) const;
};

/// Nonuniform BL recovery from (possibly quantized) firing times: sinc atoms
/// anchored at interval midpoints, integral system solved by a truncated
/// pseudoinverse (singular values below 1e-8 of the largest dropped).
SincExpansion reconstruct_bl_from_times(const FiringRecord &record,
                                        double band_limit_hz,
                                        double horizon_lo, double horizon_hi);

/// Shannon reconstruction from uniform samples at spacing ts:
/// sum_m samples[m] sinc((t - t0 - m ts)/ts).
SincExpansion reconstruct_bl_classical(const std::vector<double> &samples,
                                       double ts, double t0,
                                       double band_limit_hz);

} // namespace temq
