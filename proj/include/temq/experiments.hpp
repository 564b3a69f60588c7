// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "temq/quantization.hpp"
#include "temq/reconstruction.hpp"
#include "temq/signal_models.hpp"
#include "temq/spectral_kernel.hpp"
#include "temq/time_encoding.hpp"

namespace temq {

/// Relative L2 error over [0, T] (trapezoid rule, >= 256 grid points),
/// reported as 20 log10 of the norm ratio and floored at -200 dB.
double mse_db(const std::function<double(double)> &x_true,
              const std::function<double(double)> &x_est, double period,
              std::size_t grid_points);

/// Parameter-space variant for Dirac FRI signals, where the L2 norm of the
/// spike train is undefined: r^2 = (sum (a - a^)^2 + sum (tau - tau^)^2) /
/// (sum a^2 + sum tau^2), paired by sorted delay order; 10 log10(r^2) dB.
double mse_db_fri_params(const FriSignal &truth, const FriEstimate &estimate);

enum class SignalClass { Fri, Bl };

struct TemOverrides {
    std::optional<double> alpha; // bias = alpha * c
    std::optional<double> bias;  // absolute; wins over alpha
    std::optional<double> kappa;
    std::optional<double> delta;
};

struct ExperimentConfig {
    SignalClass signal_class = SignalClass::Fri;
    std::size_t pulse_count = 3;
    double period = 1.0;
    std::vector<unsigned> bits_sweep;
    std::vector<double> omega_sweep_hz;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    TemOverrides tem;
    double grid_step = 0.05;
    double energy = 1.6;
    int bl_half_width = 3;
    double bl_pad = 2.0; // encode-horizon padding, in units of ts
    bool bl_zero_signal = false;
    std::size_t threads = 0; // 0 = hardware concurrency
};

/// Resolved TEM parameters for a signal class (paper defaults unless
/// overridden): FRI uses alpha = 10, delta = 30, kappa 0.5 for L <= 4 and
/// 2 for L >= 8; BL uses alpha = 6, delta = 0.075, kappa = 0.4.
TemParams resolve_tem_params(const ExperimentConfig &cfg,
                             const AmplitudeBound &c);

/// One drawn FRI trial with both pipelines prepared (filtered, encoded,
/// sampled) but not yet quantized.
struct FriTrial {
    FriSignal signal;
    SosKernel kernel_iftem;
    SosKernel kernel_classical;
    TrigPolynomial filtered_iftem;
    TrigPolynomial filtered_classical;
    AmplitudeBound bound_iftem;
    AmplitudeBound bound_classical;
    TemParams tem;
    FiringRecord record;         // unquantized
    std::vector<double> samples; // unquantized, count matches record intervals
    double sample_spacing;
    std::size_t redraws;
};

FriTrial make_fri_trial(const ExperimentConfig &cfg, std::uint64_t trial_index);

struct RecoveryOutcome {
    double mse_db_classical;
    double mse_db_iftem;
    bool saturated_classical;
    bool saturated_iftem;
};

/// Quantize (bits == nullopt means none), recover FSCs, run OMP, score.
RecoveryOutcome recover_fri(const FriTrial &trial, const ExperimentConfig &cfg,
                            std::optional<unsigned> bits);

/// One drawn BL trial: signal accepted under the energy bound, encoded over
/// [horizon_lo, horizon_hi]; MSE is evaluated on the interior window.
struct BlTrial {
    BlSignal signal;
    AmplitudeBound bound;
    TemParams tem;
    FiringRecord record;
    double horizon_lo, horizon_hi;
    double eval_lo, eval_hi;
    std::size_t redraws;
};

BlTrial make_bl_trial(const ExperimentConfig &cfg, double omega_hz,
                      std::uint64_t trial_index);

RecoveryOutcome recover_bl(const BlTrial &trial,
                           std::optional<unsigned> bits);

struct TrialResult {
    std::size_t trial_index;
    unsigned bits;
    double mse_db_classical;
    double mse_db_iftem;
    std::size_t samples_used;
    bool saturated_classical;
    bool saturated_iftem;
    std::size_t redraws;
};

struct CurvePoint {
    unsigned bits;
    double classical_mean;
    double classical_std;
    double iftem_mean;
    double iftem_std;
    std::size_t trials;
};

struct MseExperimentResult {
    std::vector<TrialResult> trials; // trial-major, bits-minor order
    std::vector<CurvePoint> curve;
    std::size_t redraws_total;
};

/// Monte-Carlo MSE-vs-bits study for FRI signals (both pipelines per trial,
/// equal sample counts). Deterministic for a fixed config and seed.
MseExperimentResult run_fri_experiment(const ExperimentConfig &cfg);

struct TnStats {
    double omega_hz;
    double mean;
    double stddev;
    double min;
    double max;
    double range;
    std::size_t count;
};

/// Firing-interval statistics per band limit for BL signals.
std::vector<TnStats> run_bl_range_experiment(const ExperimentConfig &cfg);

/// MSE-vs-bits study for BL signals (IF-TEM time quantization vs classical
/// amplitude quantization at equal sample count and horizon).
MseExperimentResult run_bl_mse_experiment(const ExperimentConfig &cfg);

} // namespace temq
