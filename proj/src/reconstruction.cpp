// SPDX-License-Identifier: Apache-2.0
#include "temq/reconstruction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "temq/numerics.hpp"

namespace temq {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kSvTruncation = 1e-8; // relative to the largest singular value
constexpr double kIllConditioned = 1e12;

std::complex<double> unit_phasor(double phase) {
    return {std::cos(phase), std::sin(phase)};
}

/// Shared least-squares path: truncated-SVD solve, conjugate-symmetric
/// projection of the coefficients, residual and condition diagnostics.
FscEstimate solve_fsc(const MatrixXcd &a, const VectorXcd &y, int k_max,
                      double period) {
    Eigen::BDCSVD<MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kSvTruncation);
    VectorXcd c = svd.solve(y);

    const auto &sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double condition =
        smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();

    // Orthogonal projection onto the real-signal subspace: average c_k with
    // conj(c_{-k}).
    VectorXcd sym(c.size());
    for (int k = -k_max; k <= k_max; ++k) {
        const auto pos = c(k + k_max);
        const auto neg = c(-k + k_max);
        sym(k + k_max) = 0.5 * (pos + std::conj(neg));
    }

    FscEstimate estimate;
    estimate.k_max = k_max;
    estimate.period = period;
    estimate.coefficients.assign(sym.data(), sym.data() + sym.size());
    estimate.residual = (a * sym - y).norm();
    estimate.condition = condition;
    estimate.ill_conditioned = !(condition < kIllConditioned);
    return estimate;
}

/// Demodulated sequence s[k] = T fsc[k] / H(k w0), a pure sum of
/// exponentials for exact data.
VectorXcd demodulate(const FscEstimate &fsc, const PulseShape &pulse) {
    const double w0 = 2.0 * kPi / fsc.period;
    VectorXcd s(2 * fsc.k_max + 1);
    for (int k = -fsc.k_max; k <= fsc.k_max; ++k) {
        const std::complex<double> h = pulse.spectrum(k * w0);
        if (std::abs(h) < 1e-12 * pulse.l1_norm())
            throw std::invalid_argument(
                "estimate_fri: pulse spectrum vanishes inside the kernel passband");
        s(k + fsc.k_max) = fsc.period * fsc.coeff(k) / h;
    }
    return s;
}

/// Least-squares amplitude fit for given delays against the demodulated
/// sequence; returns the real parts.
std::vector<double> fit_amplitudes(const VectorXcd &s,
                                   const std::vector<double> &delays,
                                   int k_max, double w0) {
    MatrixXcd v(s.size(), delays.size());
    for (int k = -k_max; k <= k_max; ++k)
        for (std::size_t l = 0; l < delays.size(); ++l)
            v(k + k_max, l) = unit_phasor(-k * w0 * delays[l]);
    const VectorXcd x = v.colPivHouseholderQr().solve(s);
    std::vector<double> amplitudes(delays.size());
    for (std::size_t l = 0; l < delays.size(); ++l)
        amplitudes[l] = x(static_cast<int>(l)).real();
    return amplitudes;
}

void sort_by_delay(FriEstimate &estimate) {
    std::vector<std::size_t> order(estimate.delays.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return estimate.delays[i] < estimate.delays[j];
    });
    FriEstimate sorted;
    sorted.method = estimate.method;
    for (std::size_t i : order) {
        sorted.delays.push_back(estimate.delays[i]);
        sorted.amplitudes.push_back(estimate.amplitudes[i]);
    }
    estimate = std::move(sorted);
}

} // namespace

std::complex<double> FscEstimate::coeff(int k) const {
    if (k < -k_max || k > k_max)
        return {0.0, 0.0};
    return coefficients[static_cast<std::size_t>(k + k_max)];
}

FscEstimate fsc_from_iftem(const FiringRecord &record,
                           const SosKernel &kernel) {
    const std::vector<double> diffs = record.intervals();
    const std::size_t n = diffs.size();
    const std::size_t m = kernel.size();
    if (n < m)
        throw std::invalid_argument(
            "fsc_from_iftem: fewer firing intervals than kernel coefficients");

    const double w0 = 2.0 * kPi / kernel.period;
    const double kd = record.params.kappa * record.params.delta;
    const int k_max = kernel.k_max;

    std::vector<double> bounds;
    bounds.reserve(n + 1);
    bounds.push_back(record.start_time);
    bounds.insert(bounds.end(), record.times.begin(), record.times.end());

    MatrixXcd a(n, m);
    VectorXcd y(n);
    for (std::size_t row = 0; row < n; ++row) {
        const double ta = bounds[row];
        const double tb = bounds[row + 1];
        for (int k = -k_max; k <= k_max; ++k) {
            if (k == 0) {
                a(row, k + k_max) = tb - ta;
            } else {
                const std::complex<double> jkw{0.0, k * w0};
                a(row, k + k_max) =
                    (unit_phasor(k * w0 * tb) - unit_phasor(k * w0 * ta)) / jkw;
            }
        }
        y(row) = -record.params.bias * diffs[row] + kd;
    }
    return solve_fsc(a, y, k_max, kernel.period);
}

FscEstimate fsc_from_classical(const std::vector<double> &samples,
                               const SosKernel &kernel, double ts) {
    const std::size_t n = samples.size();
    const std::size_t m = kernel.size();
    if (n < m)
        throw std::invalid_argument(
            "fsc_from_classical: fewer samples than kernel coefficients");
    if (!(ts > 0.0))
        throw std::invalid_argument("fsc_from_classical: ts must be positive");
    if (static_cast<double>(n) * ts > kernel.period * (1.0 + 1e-12))
        throw std::invalid_argument(
            "fsc_from_classical: samples must span at most one period");

    const double w0 = 2.0 * kPi / kernel.period;
    const int k_max = kernel.k_max;
    MatrixXcd a(n, m);
    VectorXcd y(n);
    for (std::size_t row = 0; row < n; ++row) {
        const double t = static_cast<double>(row) * ts;
        for (int k = -k_max; k <= k_max; ++k)
            a(row, k + k_max) = unit_phasor(k * w0 * t);
        y(row) = samples[row];
    }
    return solve_fsc(a, y, k_max, kernel.period);
}

FriEstimate estimate_fri_omp(const FscEstimate &fsc, std::size_t pulse_count,
                             const PulseShape &pulse, double period,
                             double grid_step) {
    if (pulse_count < 1)
        throw std::invalid_argument("estimate_fri_omp: need at least one pulse");
    if (!(grid_step > 0.0))
        throw std::invalid_argument("estimate_fri_omp: grid step must be positive");
    const double cells = period / grid_step;
    const auto grid_size = static_cast<std::size_t>(std::llround(cells));
    if (grid_size < 1 || std::abs(cells - static_cast<double>(grid_size)) > 1e-9)
        throw std::invalid_argument(
            "estimate_fri_omp: grid step must divide the period");
    if (static_cast<std::size_t>(2 * fsc.k_max + 1) < 2 * pulse_count)
        throw std::invalid_argument("estimate_fri_omp: too few coefficients");
    if (grid_size < pulse_count)
        throw std::invalid_argument("estimate_fri_omp: grid smaller than pulse count");

    const double w0 = 2.0 * kPi / period;
    const VectorXcd s = demodulate(fsc, pulse);
    const int rows = 2 * fsc.k_max + 1;

    MatrixXcd dict(rows, grid_size);
    std::vector<double> grid(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
        grid[j] = static_cast<double>(j + 1) * grid_step;
        for (int k = -fsc.k_max; k <= fsc.k_max; ++k)
            dict(k + fsc.k_max, j) = unit_phasor(-k * w0 * grid[j]);
    }

    VectorXcd coeffs;
    VectorXcd residual = s;
    const auto refit = [&](const std::vector<std::size_t> &support) {
        MatrixXcd sub(rows, support.size());
        for (std::size_t i = 0; i < support.size(); ++i)
            sub.col(i) = dict.col(support[i]);
        coeffs = sub.colPivHouseholderQr().solve(s);
        residual = s - sub * coeffs;
        return residual.norm();
    };

    std::vector<bool> used(grid_size, false);
    std::vector<std::size_t> selected;
    for (std::size_t it = 0; it < pulse_count; ++it) {
        double best = -1.0;
        std::size_t best_j = grid_size;
        for (std::size_t j = 0; j < grid_size; ++j) {
            if (used[j])
                continue;
            const double corr = std::abs(dict.col(j).dot(residual));
            if (corr > best) {
                best = corr;
                best_j = j;
            }
        }
        if (best_j == grid_size || !(best > 0.0))
            throw std::runtime_error(
                "estimate_fri_omp: dictionary degenerate, atom not selectable");
        used[best_j] = true;
        selected.push_back(best_j);
        refit(selected);
    }

    // The Dirichlet atoms of a small passband are strongly coherent, so the
    // greedy pass can land a cell off the true delays when pulses sit close
    // together. Cyclic replacement sweeps (single atoms, then atom pairs for
    // jointly shifted clusters) restore the least-squares-optimal support.
    const auto apply = [&](std::size_t pos, std::size_t atom) {
        used[selected[pos]] = false;
        used[atom] = true;
        selected[pos] = atom;
    };
    double best_norm = refit(selected);
    const auto sweep_singles = [&] {
        bool any = false;
        for (int pass = 0; pass < 16; ++pass) {
            bool changed = false;
            for (std::size_t pos = 0; pos < selected.size(); ++pos) {
                std::size_t best_atom = selected[pos];
                std::vector<std::size_t> candidate = selected;
                for (std::size_t j = 0; j < grid_size; ++j) {
                    if (used[j] && j != selected[pos])
                        continue;
                    candidate[pos] = j;
                    const double norm = refit(candidate);
                    if (norm < best_norm * (1.0 - 1e-12)) {
                        best_norm = norm;
                        best_atom = j;
                    }
                }
                if (best_atom != selected[pos]) {
                    apply(pos, best_atom);
                    changed = true;
                }
            }
            if (!changed)
                break;
            any = true;
        }
        return any;
    };
    const auto sweep_pairs = [&] {
        bool changed = false;
        for (std::size_t p1 = 0; p1 + 1 < selected.size(); ++p1) {
            for (std::size_t p2 = p1 + 1; p2 < selected.size(); ++p2) {
                std::size_t best_a = selected[p1];
                std::size_t best_b = selected[p2];
                std::vector<std::size_t> candidate = selected;
                for (std::size_t a = 0; a < grid_size; ++a) {
                    if (used[a] && a != selected[p1])
                        continue;
                    for (std::size_t b = 0; b < grid_size; ++b) {
                        if (b == a || (used[b] && b != selected[p2]))
                            continue;
                        candidate[p1] = a;
                        candidate[p2] = b;
                        const double norm = refit(candidate);
                        if (norm < best_norm * (1.0 - 1e-12)) {
                            best_norm = norm;
                            best_a = a;
                            best_b = b;
                        }
                    }
                }
                if (best_a != selected[p1] || best_b != selected[p2]) {
                    apply(p1, best_a);
                    apply(p2, best_b);
                    changed = true;
                }
            }
        }
        return changed;
    };
    sweep_singles();
    for (int round = 0; round < 4 && sweep_pairs(); ++round)
        sweep_singles();

    // Replacement sweeps can still stall when every atom of a support is
    // off at once. The annihilating filter is exact on clean coefficients,
    // so its grid-snapped support enters as one more candidate and wins
    // whenever it fits better.
    try {
        const FriEstimate seeded =
            estimate_fri_af(fsc, pulse_count, pulse, period);
        std::vector<std::size_t> candidate;
        std::vector<bool> taken(grid_size, false);
        for (double tau : seeded.delays) {
            auto j = static_cast<std::ptrdiff_t>(std::llround(tau / grid_step));
            j = std::clamp<std::ptrdiff_t>(j, 1,
                                           static_cast<std::ptrdiff_t>(grid_size));
            const auto idx = static_cast<std::size_t>(j - 1);
            if (taken[idx])
                break;
            taken[idx] = true;
            candidate.push_back(idx);
        }
        if (candidate.size() == pulse_count &&
            refit(candidate) < best_norm * (1.0 - 1e-12)) {
            std::fill(used.begin(), used.end(), false);
            for (std::size_t j : candidate)
                used[j] = true;
            selected = candidate;
            best_norm = refit(selected);
            sweep_singles();
        }
    } catch (const std::exception &) {
        // rank-deficient or degenerate seed; the greedy support stands
    }
    refit(selected);

    FriEstimate estimate;
    estimate.method = FriMethod::Omp;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        estimate.delays.push_back(grid[selected[i]]);
        estimate.amplitudes.push_back(coeffs(static_cast<int>(i)).real());
    }
    sort_by_delay(estimate);
    return estimate;
}

FriEstimate estimate_fri_af(const FscEstimate &fsc, std::size_t pulse_count,
                            const PulseShape &pulse, double period) {
    const int k_max = fsc.k_max;
    const int count = 2 * k_max + 1;
    const auto order = static_cast<int>(pulse_count);
    if (pulse_count < 1)
        throw std::invalid_argument("estimate_fri_af: need at least one pulse");
    if (count < 2 * order)
        throw std::invalid_argument(
            "estimate_fri_af: need at least 2L contiguous coefficients");

    const double w0 = 2.0 * kPi / period;
    const VectorXcd s = demodulate(fsc, pulse);

    // Toeplitz system: each row annihilates a window of L+1 consecutive
    // demodulated coefficients.
    const int rows = count - order;
    MatrixXcd toep(rows, order + 1);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c <= order; ++c)
            toep(r, c) = s(r + order - c);

    Eigen::JacobiSVD<MatrixXcd> svd(toep,
                                    Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    int numerical_rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * sv(0))
            ++numerical_rank;
    if (numerical_rank < order)
        throw std::runtime_error(
            "estimate_fri_af: coefficient matrix rank below pulse count");

    const VectorXcd h = svd.matrixV().col(order);
    if (std::abs(h(0)) < 1e-12 * h.norm())
        throw std::runtime_error(
            "estimate_fri_af: degenerate annihilating polynomial");

    // Roots of sum_i h_i u^{L-i} via the companion matrix of the monic form.
    MatrixXcd companion = MatrixXcd::Zero(order, order);
    for (int i = 1; i < order; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < order; ++i)
        companion(i, order - 1) = -h(order - i) / h(0);

    Eigen::ComplexEigenSolver<MatrixXcd> eigen(companion);
    if (eigen.info() != Eigen::Success)
        throw std::runtime_error("estimate_fri_af: eigensolver failed");

    FriEstimate estimate;
    estimate.method = FriMethod::AnnihilatingFilter;
    for (int i = 0; i < order; ++i) {
        const std::complex<double> root = eigen.eigenvalues()(i);
        double tau = -period * std::arg(root) / (2.0 * kPi);
        if (tau <= 0.0)
            tau += period;
        estimate.delays.push_back(tau);
    }
    estimate.amplitudes = fit_amplitudes(s, estimate.delays, k_max, w0);
    sort_by_delay(estimate);
    return estimate;
}

double SincExpansion::eval(double t) const {
    double value = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i)
        value += weights[i] * sinc_omega(omega_rad, t - anchors[i]);
    return value;
}

SincExpansion reconstruct_bl_from_times(const FiringRecord &record,
                                        double band_limit_hz,
                                        double horizon_lo, double horizon_hi) {
    if (record.times.size() < 2)
        throw std::invalid_argument(
            "reconstruct_bl_from_times: need at least two firings");
    if (!(band_limit_hz > 0.0))
        throw std::invalid_argument(
            "reconstruct_bl_from_times: band limit must be positive");
    if (record.start_time < horizon_lo - 1e-9 ||
        record.times.back() > horizon_hi + 1e-9)
        throw std::invalid_argument(
            "reconstruct_bl_from_times: record outside the stated horizon");

    const double omega_rad = 2.0 * kPi * band_limit_hz;
    const double kd = record.params.kappa * record.params.delta;
    const std::vector<double> diffs = record.intervals();
    const std::size_t n = diffs.size();

    std::vector<double> bounds;
    bounds.reserve(n + 1);
    bounds.push_back(record.start_time);
    bounds.insert(bounds.end(), record.times.begin(), record.times.end());

    SincExpansion recon;
    recon.omega_rad = omega_rad;
    recon.anchors.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        recon.anchors[i] = 0.5 * (bounds[i] + bounds[i + 1]);

    // Quantization may push observed intervals marginally past the perfect
    // recovery density; warn and proceed.
    const double dt_obs = *std::max_element(diffs.begin(), diffs.end());
    recon.feasibility_warning = !(dt_obs < kPi / omega_rad);

    Eigen::MatrixXd b(n, n);
    Eigen::VectorXd y(n);
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < n; ++col) {
            const double anchor = recon.anchors[col];
            b(row, col) = integrate_adaptive(
                [omega_rad, anchor](double t) {
                    return sinc_omega(omega_rad, t - anchor);
                },
                bounds[row], bounds[row + 1], 1e-10);
        }
        y(row) = -record.params.bias * diffs[row] + kd;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(b,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kSvTruncation);
    const Eigen::VectorXd w = svd.solve(y);
    recon.weights.assign(w.data(), w.data() + w.size());
    return recon;
}

SincExpansion reconstruct_bl_classical(const std::vector<double> &samples,
                                       double ts, double t0,
                                       double band_limit_hz) {
    if (samples.empty())
        throw std::invalid_argument("reconstruct_bl_classical: no samples");
    if (!(ts > 0.0))
        throw std::invalid_argument("reconstruct_bl_classical: ts must be positive");
    if (!(band_limit_hz > 0.0))
        throw std::invalid_argument(
            "reconstruct_bl_classical: band limit must be positive");
    if (ts > 1.0 / (2.0 * band_limit_hz) * (1.0 + 1e-12))
        throw std::invalid_argument(
            "reconstruct_bl_classical: sample spacing above Nyquist");

    SincExpansion recon;
    recon.omega_rad = kPi / ts;
    recon.anchors.resize(samples.size());
    for (std::size_t m = 0; m < samples.size(); ++m)
        recon.anchors[m] = t0 + static_cast<double>(m) * ts;
    recon.weights = samples;
    return recon;
}

} // namespace temq
