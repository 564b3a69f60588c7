// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "temq/signal_models.hpp"
#include "temq/time_encoding.hpp"

namespace temq {

/// K-level mid-rise uniform scalar quantizer over [lo, hi]. Reconstruction
/// points are lo + (i + 0.5) step for i = 0..K-1.
struct UniformQuantizer {
    double lo;
    double hi;
    std::size_t levels;
    double step; // (hi - lo) / levels
};

UniformQuantizer make_uniform_quantizer(double lo, double hi,
                                        std::size_t levels);

/// Amplitude quantizer over [-c, c] with K = 2^bits; step 2c/K.
UniformQuantizer make_amplitude_quantizer(const AmplitudeBound &c,
                                          unsigned bits);

/// Firing-interval quantizer over [kd/(b+c), kd/(b-c)] with K = 2^bits;
/// step kd 2c / ((b+c)(b-c)K).
UniformQuantizer make_time_quantizer(const TemParams &params,
                                     const AmplitudeBound &c, unsigned bits);

/// Clamp to [lo, hi], then snap to the nearest mid-rise level. Out-of-range
/// inputs clamp and set *saturated when provided.
double quantize(const UniformQuantizer &q, double x,
                bool *saturated = nullptr);

/// Quantizes the consecutive differences T_n and rebuilds instants by
/// cumulative sum from start_time. Saturated differences are counted, not
/// rejected, so reconstruction always proceeds.
FiringRecord quantize_firing_record(const FiringRecord &record,
                                    const UniformQuantizer &q,
                                    std::size_t *saturated_count = nullptr);

struct StepSizeRow {
    std::size_t pulse_count;
    double step_iftem;
    double step_classic;
};

/// Step sizes versus pulse count with bias b = alpha c and c from the FRI
/// amplitude bound. The IF-TEM step decreases and the classical step
/// increases as the pulse count grows.
std::vector<StepSizeRow>
step_size_vs_pulses(const std::vector<std::size_t> &pulse_counts, double alpha,
                    double kappa, double delta, double a_max, double g_sup,
                    double h_l1, unsigned bits);

struct BandwidthStepRow {
    double omega_hz;
    double step_iftem;
};

/// IF-TEM step size versus band limit with c from the BL energy bound;
/// decreasing in omega.
std::vector<BandwidthStepRow>
step_size_vs_bandwidth(const std::vector<double> &omega_hz_values, double alpha,
                       double kappa, double delta, double energy,
                       unsigned bits);

} // namespace temq
