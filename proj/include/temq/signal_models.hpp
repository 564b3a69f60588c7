// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace temq {

enum class PulseKind { Dirac, Gaussian };

/// Pulse shape with a closed-form spectrum. Dirac pulses have H(w) = 1 and
/// unit L1 norm by convention; Gaussian pulses are exp(-t^2 / (2 sigma^2)).
class PulseShape {
public:
    static PulseShape dirac();
    static PulseShape gaussian(double sigma);

    PulseKind kind() const { return kind_; }
    double width() const { return sigma_; }

    /// Continuous-time Fourier transform H(omega).
    std::complex<double> spectrum(double omega) const;

    /// L1 norm of the time-domain pulse.
    double l1_norm() const;

    /// Time-domain value h(t). Defined for Gaussian only; Dirac pulses are
    /// never evaluated pointwise.
    double eval_time(double t) const;

private:
    PulseShape(PulseKind kind, double sigma) : kind_(kind), sigma_(sigma) {}
    PulseKind kind_;
    double sigma_;
};

/// T-periodic stream of weighted, delayed pulses. Delays live in (0, T]
/// and are pairwise distinct.
struct FriSignal {
    double period;
    std::vector<double> amplitudes;
    std::vector<double> delays;
    PulseShape pulse;

    std::size_t pulse_count() const { return amplitudes.size(); }
    double omega0() const;
};

FriSignal make_fri_signal(std::vector<double> amplitudes,
                          std::vector<double> delays, double period,
                          PulseShape pulse);

/// Fourier-series coefficient X[k] = (1/T) H(k w0) sum_l a_l exp(-j k w0 tau_l).
std::complex<double> fri_fsc(const FriSignal &signal, int k);

/// Truncated Fourier sum over |k| <= truncation, real part. Intended for
/// rendering; Dirac streams are otherwise handled in the FSC domain.
double eval_fri(const FriSignal &signal, double t, int truncation);

/// Finite sinc expansion with sample spacing ts = 1 / (2 band_limit_hz).
/// Coefficient index n runs over -half_width()..half_width().
struct BlSignal {
    std::vector<double> coeffs;
    double band_limit_hz;
    double energy_bound;

    double ts() const { return 1.0 / (2.0 * band_limit_hz); }
    int half_width() const { return (static_cast<int>(coeffs.size()) - 1) / 2; }
};

/// Validates and constructs a BL signal. Throws amplitude_bound_error if the
/// max amplitude on a dense grid exceeds sqrt(E * omega_rad / pi); callers
/// drawing random coefficients are expected to redraw rather than rescale.
BlSignal make_bl_signal(std::vector<double> coeffs, double band_limit_hz,
                        double energy_bound);

double eval_bl(const BlSignal &signal, double t);

enum class BoundProvenance { Fri, BlEnergy, UserSupplied };

struct AmplitudeBound {
    double value;
    BoundProvenance provenance;
};

/// Worst-case bound on the filtered FRI signal: L * a_max * ||g||_inf * ||h||_1.
AmplitudeBound fri_amplitude_bound(std::size_t pulse_count, double a_max,
                                   double g_sup, double h_l1);

/// Energy-derived bound for BL signals: sqrt(E * omega_rad / pi) with
/// omega_rad = 2 pi * band_limit_hz.
AmplitudeBound bl_amplitude_bound(double energy, double band_limit_hz);

} // namespace temq
