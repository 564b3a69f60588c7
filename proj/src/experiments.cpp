// SPDX-License-Identifier: Apache-2.0
#include "temq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "temq/errors.hpp"
#include "temq/numerics.hpp"
#include "temq/rng.hpp"

namespace temq {

namespace {

constexpr double kMseFloorDb = -200.0;

double clamp_db(double db) {
    if (!std::isfinite(db) || db < kMseFloorDb)
        return kMseFloorDb;
    return db;
}

/// Runs body(0..count-1) on a small worker pool; the first exception wins
/// and is rethrown on the caller thread.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &body) {
    if (count == 0)
        return;
    std::size_t n_threads =
        threads ? threads
                : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

struct MeanStd {
    double mean;
    double stddev;
};

MeanStd mean_std(const std::vector<double> &values) {
    const auto n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, stddev};
}

void validate_bits_sweep(const std::vector<unsigned> &bits) {
    if (bits.empty())
        throw std::invalid_argument("bits sweep must be nonempty");
    for (std::size_t i = 1; i < bits.size(); ++i)
        if (bits[i] <= bits[i - 1])
            throw std::invalid_argument("bits sweep must be increasing");
}

/// Expected MSE per bits value: the per-trial error ratios are averaged in
/// the linear domain and reported in dB (the floor value contributes a
/// negligible 1e-20); the std column is the dB-domain trial spread.
std::vector<CurvePoint> aggregate_curve(const std::vector<TrialResult> &results,
                                        const std::vector<unsigned> &bits) {
    const auto linear_mean_db = [](const std::vector<double> &db_values) {
        double sum = 0.0;
        for (double db : db_values)
            sum += std::pow(10.0, db / 10.0);
        const double mean = sum / static_cast<double>(db_values.size());
        return std::max(kMseFloorDb, 10.0 * std::log10(mean));
    };
    std::vector<CurvePoint> curve;
    curve.reserve(bits.size());
    for (std::size_t bi = 0; bi < bits.size(); ++bi) {
        std::vector<double> classical, iftem;
        for (std::size_t i = bi; i < results.size(); i += bits.size()) {
            classical.push_back(results[i].mse_db_classical);
            iftem.push_back(results[i].mse_db_iftem);
        }
        curve.push_back({bits[bi], linear_mean_db(classical),
                         mean_std(classical).stddev, linear_mean_db(iftem),
                         mean_std(iftem).stddev, classical.size()});
    }
    return curve;
}

} // namespace

double mse_db(const std::function<double(double)> &x_true,
              const std::function<double(double)> &x_est, double period,
              std::size_t grid_points) {
    if (grid_points < 256)
        throw std::invalid_argument("mse_db: need at least 256 grid points");
    if (!(period > 0.0))
        throw std::invalid_argument("mse_db: period must be positive");
    const double h = period / static_cast<double>(grid_points - 1);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double t = static_cast<double>(i) * h;
        const double w = (i == 0 || i + 1 == grid_points) ? 0.5 : 1.0;
        const double x = x_true(t);
        const double e = x - x_est(t);
        num += w * e * e;
        den += w * x * x;
    }
    if (den == 0.0)
        throw std::invalid_argument("mse_db: reference signal has zero norm");
    if (num == 0.0)
        return kMseFloorDb;
    return clamp_db(10.0 * std::log10(num / den));
}

double mse_db_fri_params(const FriSignal &truth, const FriEstimate &estimate) {
    const std::size_t count = truth.pulse_count();
    if (estimate.delays.size() != count ||
        estimate.amplitudes.size() != count)
        throw std::invalid_argument(
            "mse_db_fri_params: estimate size differs from the signal");

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return truth.delays[i] < truth.delays[j];
    });

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double a = truth.amplitudes[order[i]];
        const double tau = truth.delays[order[i]];
        const double da = a - estimate.amplitudes[i];
        const double dt = tau - estimate.delays[i];
        num += da * da + dt * dt;
        den += a * a + tau * tau;
    }
    if (den == 0.0)
        throw std::invalid_argument("mse_db_fri_params: zero-norm reference");
    if (num == 0.0)
        return kMseFloorDb;
    return clamp_db(10.0 * std::log10(num / den));
}

TemParams resolve_tem_params(const ExperimentConfig &cfg,
                             const AmplitudeBound &c) {
    double kappa, delta, alpha;
    if (cfg.signal_class == SignalClass::Fri) {
        alpha = 10.0;
        delta = 30.0;
        kappa = cfg.pulse_count >= 8 ? 2.0 : 0.5;
    } else {
        alpha = 6.0;
        delta = 0.075;
        kappa = 0.4;
    }
    if (cfg.tem.alpha)
        alpha = *cfg.tem.alpha;
    if (cfg.tem.kappa)
        kappa = *cfg.tem.kappa;
    if (cfg.tem.delta)
        delta = *cfg.tem.delta;
    const double bias = cfg.tem.bias ? *cfg.tem.bias : alpha * c.value;
    return TemParams{bias, kappa, delta};
}

FriTrial make_fri_trial(const ExperimentConfig &cfg,
                        std::uint64_t trial_index) {
    if (cfg.pulse_count < 1)
        throw std::invalid_argument("make_fri_trial: pulse count must be >= 1");
    const double cells = cfg.period / cfg.grid_step;
    const auto grid_size = static_cast<std::size_t>(std::llround(cells));
    if (grid_size < cfg.pulse_count ||
        std::abs(cells - static_cast<double>(grid_size)) > 1e-9)
        throw std::invalid_argument(
            "make_fri_trial: grid step must divide the period and fit all pulses");

    SplitMix64 rng = SplitMix64::substream(cfg.seed, trial_index);
    const PulseShape pulse = PulseShape::dirac();
    const SosKernel kernel_iftem =
        SosKernel::for_iftem_fri(cfg.pulse_count, cfg.period);
    const SosKernel kernel_classical =
        SosKernel::for_classical_fri(cfg.pulse_count, cfg.period);

    // Quantizer ranges are fixed per experiment, so the bound uses the
    // distribution's amplitude limit rather than the drawn max.
    const AmplitudeBound bound_iftem = fri_amplitude_bound(
        cfg.pulse_count, 1.0, kernel_iftem.impulse_sup_bound(), pulse.l1_norm());
    const AmplitudeBound bound_classical =
        fri_amplitude_bound(cfg.pulse_count, 1.0,
                            kernel_classical.impulse_sup_bound(),
                            pulse.l1_norm());

    constexpr std::size_t kMaxRedraws = 100;
    for (std::size_t redraw = 0; redraw <= kMaxRedraws; ++redraw) {
        std::vector<double> amplitudes(cfg.pulse_count);
        for (auto &a : amplitudes)
            a = rng.uniform(-1.0, 1.0);

        // Distinct delays on the grid lattice in (0, T].
        std::vector<std::size_t> cells_left(grid_size);
        std::iota(cells_left.begin(), cells_left.end(), 1);
        std::vector<double> delays(cfg.pulse_count);
        for (std::size_t l = 0; l < cfg.pulse_count; ++l) {
            const std::size_t pick = rng.uniform_index(cells_left.size());
            delays[l] = static_cast<double>(cells_left[pick]) * cfg.grid_step;
            cells_left.erase(cells_left.begin() +
                             static_cast<std::ptrdiff_t>(pick));
        }

        FriTrial trial{make_fri_signal(amplitudes, delays, cfg.period, pulse),
                       kernel_iftem,
                       kernel_classical,
                       TrigPolynomial::zero(cfg.period),
                       TrigPolynomial::zero(cfg.period),
                       bound_iftem,
                       bound_classical,
                       TemParams{},
                       FiringRecord{},
                       {},
                       0.0,
                       redraw};
        trial.filtered_iftem = filter_fri(trial.signal, kernel_iftem);
        trial.filtered_classical = filter_fri(trial.signal, kernel_classical);
        trial.tem = resolve_tem_params(cfg, bound_iftem);

        // Raise the bias in 0.5c steps until the firing-rate condition holds
        // and one period yields enough intervals for the FSC solve.
        bool encoded = false;
        for (int raise = 0; raise < 64 && !encoded; ++raise) {
            if (!feasible_fri(trial.tem, bound_iftem, cfg.pulse_count,
                              cfg.period)) {
                trial.tem.bias += 0.5 * bound_iftem.value;
                continue;
            }
            const double dt_max =
                interval_bounds(trial.tem, bound_iftem).dt_max;
            trial.record = encode_iftem(trial.filtered_iftem, trial.tem, 0.0,
                                        cfg.period + dt_max);
            if (trial.record.times.size() >= kernel_iftem.size())
                encoded = true;
            else
                trial.tem.bias += 0.5 * bound_iftem.value;
        }
        if (!encoded)
            continue; // redraw

        const std::size_t n = trial.record.times.size();
        trial.sample_spacing = cfg.period / static_cast<double>(n);
        trial.samples =
            sample_classical(trial.filtered_classical, trial.sample_spacing, n,
                             0.0);
        return trial;
    }
    throw feasibility_error(
        "make_fri_trial: could not reach the firing-count target after redraws");
}

RecoveryOutcome recover_fri(const FriTrial &trial, const ExperimentConfig &cfg,
                            std::optional<unsigned> bits) {
    RecoveryOutcome outcome{0.0, 0.0, false, false};

    FiringRecord record = trial.record;
    std::vector<double> samples = trial.samples;
    if (bits) {
        const UniformQuantizer tq =
            make_time_quantizer(trial.tem, trial.bound_iftem, *bits);
        std::size_t saturated = 0;
        record = quantize_firing_record(trial.record, tq, &saturated);
        outcome.saturated_iftem = saturated > 0;

        const UniformQuantizer aq =
            make_amplitude_quantizer(trial.bound_classical, *bits);
        for (auto &v : samples) {
            bool sat = false;
            v = quantize(aq, v, &sat);
            outcome.saturated_classical |= sat;
        }
    }

    const FscEstimate fsc_iftem = fsc_from_iftem(record, trial.kernel_iftem);
    const FriEstimate est_iftem =
        estimate_fri_omp(fsc_iftem, cfg.pulse_count, trial.signal.pulse,
                         cfg.period, cfg.grid_step);

    const FscEstimate fsc_classical =
        fsc_from_classical(samples, trial.kernel_classical,
                           trial.sample_spacing);
    const FriEstimate est_classical =
        estimate_fri_omp(fsc_classical, cfg.pulse_count, trial.signal.pulse,
                         cfg.period, cfg.grid_step);

    if (trial.signal.pulse.kind() == PulseKind::Dirac) {
        outcome.mse_db_iftem = mse_db_fri_params(trial.signal, est_iftem);
        outcome.mse_db_classical =
            mse_db_fri_params(trial.signal, est_classical);
    } else {
        // Non-Dirac pulses admit a waveform-domain metric via the truncated
        // Fourier rendering.
        const int truncation = 8 * trial.kernel_iftem.k_max;
        const double w0 = trial.signal.omega0();
        auto render = [&](const FriEstimate &est) {
            return [&, est](double t) {
                double value = 0.0;
                for (int k = -truncation; k <= truncation; ++k) {
                    std::complex<double> sum{0.0, 0.0};
                    for (std::size_t l = 0; l < est.delays.size(); ++l) {
                        const double phase = -k * w0 * est.delays[l];
                        sum += est.amplitudes[l] *
                               std::complex<double>(std::cos(phase),
                                                    std::sin(phase));
                    }
                    const std::complex<double> xk =
                        trial.signal.pulse.spectrum(k * w0) * sum /
                        trial.signal.period;
                    value += (xk * std::complex<double>(std::cos(k * w0 * t),
                                                        std::sin(k * w0 * t)))
                                 .real();
                }
                return value;
            };
        };
        auto truth = [&](double t) {
            return eval_fri(trial.signal, t, truncation);
        };
        outcome.mse_db_iftem =
            mse_db(truth, render(est_iftem), cfg.period, 1024);
        outcome.mse_db_classical =
            mse_db(truth, render(est_classical), cfg.period, 1024);
    }
    return outcome;
}

MseExperimentResult run_fri_experiment(const ExperimentConfig &cfg) {
    if (cfg.signal_class != SignalClass::Fri)
        throw std::invalid_argument("run_fri_experiment: config is not FRI");
    if (cfg.trials < 1)
        throw std::invalid_argument("run_fri_experiment: trials must be >= 1");
    validate_bits_sweep(cfg.bits_sweep);

    MseExperimentResult result;
    result.trials.resize(cfg.trials * cfg.bits_sweep.size());
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial_index) {
        const FriTrial trial = make_fri_trial(cfg, trial_index);
        for (std::size_t bi = 0; bi < cfg.bits_sweep.size(); ++bi) {
            const unsigned bits = cfg.bits_sweep[bi];
            const RecoveryOutcome outcome = recover_fri(trial, cfg, bits);
            result.trials[trial_index * cfg.bits_sweep.size() + bi] =
                TrialResult{trial_index,
                            bits,
                            outcome.mse_db_classical,
                            outcome.mse_db_iftem,
                            trial.record.times.size(),
                            outcome.saturated_classical,
                            outcome.saturated_iftem,
                            trial.redraws};
        }
    });
    result.curve = aggregate_curve(result.trials, cfg.bits_sweep);
    result.redraws_total = 0;
    for (std::size_t i = 0; i < result.trials.size();
         i += cfg.bits_sweep.size())
        result.redraws_total += result.trials[i].redraws;
    return result;
}

BlTrial make_bl_trial(const ExperimentConfig &cfg, double omega_hz,
                      std::uint64_t trial_index) {
    if (cfg.bl_half_width < 0)
        throw std::invalid_argument("make_bl_trial: negative half width");
    const AmplitudeBound bound = bl_amplitude_bound(cfg.energy, omega_hz);
    const TemParams params = resolve_tem_params(cfg, bound);
    if (!feasible_bl(params, bound, omega_hz))
        throw feasibility_error(
            "make_bl_trial: firing rate below the BL recovery density");

    SplitMix64 rng = SplitMix64::substream(cfg.seed, trial_index);
    const std::size_t n_coeffs =
        2 * static_cast<std::size_t>(cfg.bl_half_width) + 1;

    constexpr std::size_t kMaxRedraws = 10000;
    for (std::size_t redraw = 0; redraw <= kMaxRedraws; ++redraw) {
        std::vector<double> coeffs(n_coeffs, 0.0);
        if (!cfg.bl_zero_signal)
            for (auto &c : coeffs)
                c = rng.uniform(-1.0, 1.0);
        try {
            BlTrial trial{make_bl_signal(coeffs, omega_hz, cfg.energy),
                          bound,
                          params,
                          FiringRecord{},
                          0.0,
                          0.0,
                          0.0,
                          0.0,
                          redraw};
            const double ts = trial.signal.ts();
            const double support =
                static_cast<double>(cfg.bl_half_width) * ts;
            trial.horizon_lo = -(support + cfg.bl_pad * ts);
            trial.horizon_hi = support + cfg.bl_pad * ts;
            trial.eval_lo = -support;
            trial.eval_hi = support;
            trial.record = encode_iftem_bl(trial.signal, bound.value, params,
                                           trial.horizon_lo, trial.horizon_hi);
            return trial;
        } catch (const amplitude_bound_error &) {
            // redraw, keeping the coefficient distribution uniform
        }
    }
    throw feasibility_error("make_bl_trial: amplitude-bound redraws exhausted");
}

RecoveryOutcome recover_bl(const BlTrial &trial, std::optional<unsigned> bits) {
    RecoveryOutcome outcome{0.0, 0.0, false, false};
    const double omega_hz = trial.signal.band_limit_hz;
    const double window = trial.eval_hi - trial.eval_lo;

    FiringRecord record = trial.record;
    double drift_allowance = 0.0;
    if (bits) {
        const UniformQuantizer tq =
            make_time_quantizer(trial.tem, trial.bound, *bits);
        std::size_t saturated = 0;
        record = quantize_firing_record(trial.record, tq, &saturated);
        outcome.saturated_iftem = saturated > 0;
        // Cumulative-sum reconstruction drifts at most n * step / 2.
        drift_allowance =
            static_cast<double>(record.times.size()) * tq.step * 0.5;
    }
    const SincExpansion recon_iftem = reconstruct_bl_from_times(
        record, omega_hz, trial.horizon_lo - drift_allowance,
        trial.horizon_hi + drift_allowance);

    // Classical branch at the same count over the same horizon.
    const std::size_t n = trial.record.times.size();
    const double ts = (trial.horizon_hi - trial.horizon_lo) /
                      static_cast<double>(n);
    std::vector<double> samples(n);
    for (std::size_t m = 0; m < n; ++m)
        samples[m] =
            eval_bl(trial.signal,
                    trial.horizon_lo + static_cast<double>(m) * ts);
    if (bits) {
        const UniformQuantizer aq = make_amplitude_quantizer(trial.bound, *bits);
        for (auto &v : samples) {
            bool sat = false;
            v = quantize(aq, v, &sat);
            outcome.saturated_classical |= sat;
        }
    }
    const SincExpansion recon_classical =
        reconstruct_bl_classical(samples, ts, trial.horizon_lo, omega_hz);

    const auto truth = [&](double u) {
        return eval_bl(trial.signal, trial.eval_lo + u);
    };
    outcome.mse_db_iftem = mse_db(
        truth, [&](double u) { return recon_iftem.eval(trial.eval_lo + u); },
        window, 1024);
    outcome.mse_db_classical = mse_db(
        truth,
        [&](double u) { return recon_classical.eval(trial.eval_lo + u); },
        window, 1024);
    return outcome;
}

std::vector<TnStats> run_bl_range_experiment(const ExperimentConfig &cfg) {
    if (cfg.signal_class != SignalClass::Bl)
        throw std::invalid_argument("run_bl_range_experiment: config is not BL");
    if (cfg.omega_sweep_hz.empty())
        throw std::invalid_argument("run_bl_range_experiment: empty omega sweep");
    if (cfg.trials < 1)
        throw std::invalid_argument("run_bl_range_experiment: trials must be >= 1");

    // Validate feasibility for the whole sweep up front.
    for (double omega_hz : cfg.omega_sweep_hz) {
        const AmplitudeBound bound = bl_amplitude_bound(cfg.energy, omega_hz);
        const TemParams params = resolve_tem_params(cfg, bound);
        if (!feasible_bl(params, bound, omega_hz))
            throw feasibility_error(
                "run_bl_range_experiment: configuration violates the recovery density");
    }

    std::vector<TnStats> stats;
    for (std::size_t oi = 0; oi < cfg.omega_sweep_hz.size(); ++oi) {
        const double omega_hz = cfg.omega_sweep_hz[oi];
        std::vector<std::vector<double>> per_trial(cfg.trials);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
            const BlTrial trial =
                make_bl_trial(cfg, omega_hz, oi * cfg.trials + t);
            per_trial[t] = trial.record.intervals();
        });
        std::vector<double> all;
        for (const auto &v : per_trial)
            all.insert(all.end(), v.begin(), v.end());
        if (all.empty())
            throw std::runtime_error("run_bl_range_experiment: no firings observed");
        const MeanStd ms = mean_std(all);
        const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
        stats.push_back(
            {omega_hz, ms.mean, ms.stddev, *lo, *hi, *hi - *lo, all.size()});
    }
    return stats;
}

MseExperimentResult run_bl_mse_experiment(const ExperimentConfig &cfg) {
    if (cfg.signal_class != SignalClass::Bl)
        throw std::invalid_argument("run_bl_mse_experiment: config is not BL");
    if (cfg.omega_sweep_hz.size() != 1)
        throw std::invalid_argument(
            "run_bl_mse_experiment: exactly one band limit per run");
    if (cfg.trials < 1)
        throw std::invalid_argument("run_bl_mse_experiment: trials must be >= 1");
    validate_bits_sweep(cfg.bits_sweep);
    const double omega_hz = cfg.omega_sweep_hz.front();

    MseExperimentResult result;
    result.trials.resize(cfg.trials * cfg.bits_sweep.size());
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial_index) {
        const BlTrial trial = make_bl_trial(cfg, omega_hz, trial_index);
        for (std::size_t bi = 0; bi < cfg.bits_sweep.size(); ++bi) {
            const unsigned bits = cfg.bits_sweep[bi];
            const RecoveryOutcome outcome = recover_bl(trial, bits);
            result.trials[trial_index * cfg.bits_sweep.size() + bi] =
                TrialResult{trial_index,
                            bits,
                            outcome.mse_db_classical,
                            outcome.mse_db_iftem,
                            trial.record.times.size(),
                            outcome.saturated_classical,
                            outcome.saturated_iftem,
                            trial.redraws};
        }
    });
    result.curve = aggregate_curve(result.trials, cfg.bits_sweep);
    result.redraws_total = 0;
    for (std::size_t i = 0; i < result.trials.size();
         i += cfg.bits_sweep.size())
        result.redraws_total += result.trials[i].redraws;
    return result;
}

} // namespace temq
