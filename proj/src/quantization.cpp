// SPDX-License-Identifier: Apache-2.0
#include "temq/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace temq {

namespace {

std::size_t levels_from_bits(unsigned bits) {
    if (bits < 1 || bits > 62)
        throw std::invalid_argument("quantizer: bits must be in [1, 62]");
    return std::size_t{1} << bits;
}

} // namespace

UniformQuantizer make_uniform_quantizer(double lo, double hi,
                                        std::size_t levels) {
    if (!(lo < hi))
        throw std::invalid_argument("quantizer: lo must be below hi");
    if (levels < 2)
        throw std::invalid_argument("quantizer: need at least two levels");
    return UniformQuantizer{lo, hi, levels,
                            (hi - lo) / static_cast<double>(levels)};
}

UniformQuantizer make_amplitude_quantizer(const AmplitudeBound &c,
                                          unsigned bits) {
    if (!(c.value > 0.0))
        throw std::invalid_argument("make_amplitude_quantizer: bound must be positive");
    return make_uniform_quantizer(-c.value, c.value, levels_from_bits(bits));
}

UniformQuantizer make_time_quantizer(const TemParams &params,
                                     const AmplitudeBound &c, unsigned bits) {
    const IntervalBounds bounds = interval_bounds(params, c);
    return make_uniform_quantizer(bounds.dt_min, bounds.dt_max,
                                  levels_from_bits(bits));
}

double quantize(const UniformQuantizer &q, double x, bool *saturated) {
    if (saturated)
        *saturated = x < q.lo || x > q.hi;
    const double clamped = std::clamp(x, q.lo, q.hi);
    double cell = std::floor((clamped - q.lo) / q.step);
    cell = std::clamp(cell, 0.0, static_cast<double>(q.levels - 1));
    return q.lo + (cell + 0.5) * q.step;
}

FiringRecord quantize_firing_record(const FiringRecord &record,
                                    const UniformQuantizer &q,
                                    std::size_t *saturated_count) {
    std::size_t saturated = 0;
    FiringRecord out;
    out.params = record.params;
    out.start_time = record.start_time;
    out.times.reserve(record.times.size());
    double t = record.start_time;
    for (double diff : record.intervals()) {
        bool sat = false;
        t += quantize(q, diff, &sat);
        saturated += sat ? 1 : 0;
        out.times.push_back(t);
    }
    if (saturated_count)
        *saturated_count = saturated;
    return out;
}

std::vector<StepSizeRow>
step_size_vs_pulses(const std::vector<std::size_t> &pulse_counts, double alpha,
                    double kappa, double delta, double a_max, double g_sup,
                    double h_l1, unsigned bits) {
    if (!(alpha > 1.0))
        throw std::invalid_argument("step_size_vs_pulses: alpha must exceed 1");
    std::vector<StepSizeRow> rows;
    rows.reserve(pulse_counts.size());
    for (std::size_t count : pulse_counts) {
        const AmplitudeBound c = fri_amplitude_bound(count, a_max, g_sup, h_l1);
        const TemParams params{alpha * c.value, kappa, delta};
        rows.push_back({count, make_time_quantizer(params, c, bits).step,
                        make_amplitude_quantizer(c, bits).step});
    }
    return rows;
}

std::vector<BandwidthStepRow>
step_size_vs_bandwidth(const std::vector<double> &omega_hz_values, double alpha,
                       double kappa, double delta, double energy,
                       unsigned bits) {
    if (!(alpha > 1.0))
        throw std::invalid_argument("step_size_vs_bandwidth: alpha must exceed 1");
    std::vector<BandwidthStepRow> rows;
    rows.reserve(omega_hz_values.size());
    for (double omega_hz : omega_hz_values) {
        const AmplitudeBound c = bl_amplitude_bound(energy, omega_hz);
        const TemParams params{alpha * c.value, kappa, delta};
        rows.push_back({omega_hz, make_time_quantizer(params, c, bits).step});
    }
    return rows;
}

} // namespace temq
