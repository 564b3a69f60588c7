// SPDX-License-Identifier: Apache-2.0
#include "temq/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "temq/cli/config.hpp"
#include "temq/errors.hpp"
#include "temq/experiments.hpp"
#include "temq/quantization.hpp"

namespace temq::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char *kToolVersion = "0.1.0";

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v) {
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, result.ptr);
}

/// Fixed 18-significant-digit scientific form for firing instants.
std::string format_instant(double v) {
    char buf[48];
    const auto result =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 17);
    return std::string(buf, result.ptr);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunContext {
    KeyValueConfig config;
    fs::path out_dir;
    std::string started;
};

RunContext open_run(const CliOptions &options) {
    RunContext ctx{KeyValueConfig::from_file(options.config_path),
                   fs::path(options.out_dir), utc_timestamp()};
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" +
                                 options.out_dir + "'");
    return ctx;
}

void write_manifest(const RunContext &ctx, const std::string &command,
                    std::uint64_t seed,
                    const std::vector<std::string> &outputs,
                    const nlohmann::json &extra = {}) {
    nlohmann::json manifest{
        {"schema_version", 1},
        {"command", command},
        {"config_hash", ctx.config.canonical_hash()},
        {"tool_version", kToolVersion},
        {"seed", seed},
        {"started_utc", ctx.started},
        {"finished_utc", utc_timestamp()},
        {"outputs", outputs},
    };
    if (!extra.is_null() && !extra.empty())
        manifest["notes"] = extra;
    std::ofstream out(ctx.out_dir / "manifest.json");
    out << manifest.dump(2) << "\n";
}

void write_lines(const fs::path &path, const std::vector<std::string> &lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    for (const auto &line : lines)
        out << line << "\n";
}

/// Keys shared by the experiment configs.
const std::set<std::string> kCommonExperimentKeys = {
    "experiment", "seed", "trials", "threads", "alpha", "kappa", "delta",
};

void apply_tem_overrides(const KeyValueConfig &config, ExperimentConfig &cfg) {
    if (config.has("alpha"))
        cfg.tem.alpha = config.get_double("alpha");
    if (config.has("kappa"))
        cfg.tem.kappa = config.get_double("kappa");
    if (config.has("delta"))
        cfg.tem.delta = config.get_double("delta");
}

void check_experiment_kind(const KeyValueConfig &config,
                           const std::string &expected) {
    if (config.has("experiment") && config.get_string("experiment") != expected)
        throw config_error("experiment", "config is for '" +
                                             config.get_string("experiment") +
                                             "', not '" + expected + "'");
}

ExperimentConfig fri_mse_config(const KeyValueConfig &config,
                                const CliOptions &options) {
    auto keys = kCommonExperimentKeys;
    keys.insert({"L", "period", "bits", "grid_step"});
    config.restrict_keys(keys);
    check_experiment_kind(config, "fri-mse");

    ExperimentConfig cfg;
    cfg.signal_class = SignalClass::Fri;
    cfg.pulse_count = config.get_u64("L");
    cfg.period = config.get_double("period");
    cfg.bits_sweep = config.get_unsigned_list("bits");
    cfg.trials = options.trials ? *options.trials : config.get_u64("trials");
    cfg.seed = options.seed ? *options.seed : config.get_u64("seed");
    cfg.grid_step = config.get_double("grid_step", 0.05);
    cfg.threads = config.get_u64("threads", 0);
    apply_tem_overrides(config, cfg);
    if (!(cfg.period > 0.0))
        throw config_error("period", "must be positive");
    if (cfg.trials < 1)
        throw config_error("trials", "must be at least 1");
    return cfg;
}

ExperimentConfig bl_config(const KeyValueConfig &config,
                           const CliOptions &options, const char *experiment,
                           bool needs_bits) {
    auto keys = kCommonExperimentKeys;
    keys.insert({"omega_hz", "energy", "bl_half_width", "bl_pad",
                 "zero_signal"});
    if (needs_bits)
        keys.insert("bits");
    config.restrict_keys(keys);
    check_experiment_kind(config, experiment);

    ExperimentConfig cfg;
    cfg.signal_class = SignalClass::Bl;
    cfg.omega_sweep_hz = config.get_double_list("omega_hz");
    cfg.energy = config.get_double("energy", 1.6);
    cfg.bl_half_width = static_cast<int>(config.get_u64("bl_half_width", 3));
    cfg.bl_pad = config.get_double("bl_pad", 2.0);
    cfg.bl_zero_signal = config.get_string("zero_signal", "false") == "true";
    cfg.trials = options.trials ? *options.trials : config.get_u64("trials");
    cfg.seed = options.seed ? *options.seed : config.get_u64("seed");
    cfg.threads = config.get_u64("threads", 0);
    if (needs_bits)
        cfg.bits_sweep = config.get_unsigned_list("bits");
    apply_tem_overrides(config, cfg);
    for (double w : cfg.omega_sweep_hz)
        if (!(w > 0.0))
            throw config_error("omega_hz", "band limits must be positive");
    if (!(cfg.energy > 0.0))
        throw config_error("energy", "must be positive");
    if (cfg.trials < 1)
        throw config_error("trials", "must be at least 1");
    return cfg;
}

std::vector<std::string> mse_csv_lines(const MseExperimentResult &result) {
    std::vector<std::string> lines;
    lines.push_back("bits,mse_db_classical_mean,mse_db_classical_std,"
                    "mse_db_iftem_mean,mse_db_iftem_std,n_trials");
    for (const auto &point : result.curve)
        lines.push_back(std::to_string(point.bits) + "," +
                        format_double(point.classical_mean) + "," +
                        format_double(point.classical_std) + "," +
                        format_double(point.iftem_mean) + "," +
                        format_double(point.iftem_std) + "," +
                        std::to_string(point.trials));
    return lines;
}

int run_guarded(const std::function<void()> &body) {
    try {
        body();
        return kExitOk;
    } catch (const config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const feasibility_error &e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
}

} // namespace

int cmd_fri_mse(const CliOptions &options) {
    return run_guarded([&] {
        RunContext ctx = open_run(options);
        const ExperimentConfig cfg = fri_mse_config(ctx.config, options);
        const MseExperimentResult result = run_fri_experiment(cfg);
        write_lines(ctx.out_dir / "fri_mse.csv", mse_csv_lines(result));
        write_manifest(ctx, "fri-mse", cfg.seed, {"fri_mse.csv"},
                       {{"mse_metric", "fri-parameter-space (Dirac pulses): "
                                       "amplitude and delay errors against "
                                       "amplitude and delay norms"},
                        {"redraws_total", result.redraws_total}});
        std::cout << "fri-mse: L=" << cfg.pulse_count << ", "
                  << cfg.bits_sweep.size() << " bit levels x " << cfg.trials
                  << " trials -> "
                  << (ctx.out_dir / "fri_mse.csv").string() << "\n";
    });
}

int cmd_bl_range(const CliOptions &options) {
    return run_guarded([&] {
        RunContext ctx = open_run(options);
        const ExperimentConfig cfg =
            bl_config(ctx.config, options, "bl-range", false);
        const std::vector<TnStats> stats = run_bl_range_experiment(cfg);
        std::vector<std::string> lines{
            "omega_hz,tn_mean,tn_std,tn_min,tn_max,tn_range"};
        for (const auto &row : stats)
            lines.push_back(format_double(row.omega_hz) + "," +
                            format_double(row.mean) + "," +
                            format_double(row.stddev) + "," +
                            format_double(row.min) + "," +
                            format_double(row.max) + "," +
                            format_double(row.range));
        write_lines(ctx.out_dir / "bl_range.csv", lines);
        write_manifest(ctx, "bl-range", cfg.seed, {"bl_range.csv"});
        std::cout << "bl-range: " << stats.size() << " band limits x "
                  << cfg.trials << " trials -> "
                  << (ctx.out_dir / "bl_range.csv").string() << "\n";
    });
}

int cmd_bl_mse(const CliOptions &options) {
    return run_guarded([&] {
        RunContext ctx = open_run(options);
        const ExperimentConfig cfg =
            bl_config(ctx.config, options, "bl-mse", true);
        if (cfg.omega_sweep_hz.size() != 1)
            throw config_error("omega_hz",
                               "bl-mse runs one band limit per invocation");
        const MseExperimentResult result = run_bl_mse_experiment(cfg);
        write_lines(ctx.out_dir / "bl_mse.csv", mse_csv_lines(result));
        write_manifest(ctx, "bl-mse", cfg.seed, {"bl_mse.csv"},
                       {{"redraws_total", result.redraws_total}});
        std::cout << "bl-mse: omega=" << cfg.omega_sweep_hz.front() << " Hz, "
                  << cfg.bits_sweep.size() << " bit levels x " << cfg.trials
                  << " trials -> " << (ctx.out_dir / "bl_mse.csv").string()
                  << "\n";
    });
}

int cmd_step_table(const CliOptions &options) {
    return run_guarded([&] {
        RunContext ctx = open_run(options);
        ctx.config.restrict_keys({"experiment", "L_values", "omega_hz", "alpha",
                                  "kappa", "delta", "bits", "a_max", "g_sup",
                                  "h_l1", "energy"});
        check_experiment_kind(ctx.config, "step-table");
        const double alpha = ctx.config.get_double("alpha", 10.0);
        const double kappa = ctx.config.get_double("kappa", 0.5);
        const double delta = ctx.config.get_double("delta", 30.0);
        const auto bits =
            static_cast<unsigned>(ctx.config.get_u64("bits", 4));
        if (!ctx.config.has("L_values") && !ctx.config.has("omega_hz"))
            throw config_error("L_values",
                               "step-table needs L_values and/or omega_hz");

        std::vector<std::string> outputs;
        if (ctx.config.has("L_values")) {
            const auto rows = step_size_vs_pulses(
                ctx.config.get_size_list("L_values"), alpha, kappa, delta,
                ctx.config.get_double("a_max", 1.0),
                ctx.config.get_double("g_sup", 2.0),
                ctx.config.get_double("h_l1", 1.0), bits);
            std::vector<std::string> lines{"pulse_count,step_iftem,step_classic"};
            for (const auto &row : rows)
                lines.push_back(std::to_string(row.pulse_count) + "," +
                                format_double(row.step_iftem) + "," +
                                format_double(row.step_classic));
            write_lines(ctx.out_dir / "step_table_pulses.csv", lines);
            outputs.push_back("step_table_pulses.csv");
        }
        if (ctx.config.has("omega_hz")) {
            const auto rows = step_size_vs_bandwidth(
                ctx.config.get_double_list("omega_hz"), alpha, kappa, delta,
                ctx.config.get_double("energy", 1.6), bits);
            std::vector<std::string> lines{"omega_hz,step_iftem"};
            for (const auto &row : rows)
                lines.push_back(format_double(row.omega_hz) + "," +
                                format_double(row.step_iftem));
            write_lines(ctx.out_dir / "step_table_bandwidth.csv", lines);
            outputs.push_back("step_table_bandwidth.csv");
        }
        write_manifest(ctx, "step-table", 0, outputs);
        std::cout << "step-table: " << outputs.size() << " table(s) -> "
                  << ctx.out_dir.string() << "\n";
    });
}

int cmd_encode(const CliOptions &options) {
    return run_guarded([&] {
        RunContext ctx = open_run(options);
        ctx.config.restrict_keys(
            {"experiment", "bias", "kappa", "delta", "t0", "t_end", "k_max"});
        check_experiment_kind(ctx.config, "encode");
        const TemParams params{ctx.config.get_double("bias"),
                               ctx.config.get_double("kappa"),
                               ctx.config.get_double("delta")};
        const double t0 = ctx.config.get_double("t0", 0.0);
        const double t_end = ctx.config.get_double("t_end");
        if (t_end < t0)
            throw config_error("t_end", "must not precede t0");

        const KeyValueConfig signal_spec =
            KeyValueConfig::from_file(options.signal_path);
        const std::string kind = signal_spec.get_string("signal");
        FiringRecord record;
        if (kind == "fri") {
            signal_spec.restrict_keys({"signal", "period", "amplitudes",
                                       "delays", "pulse", "pulse_width"});
            const std::string pulse_kind =
                signal_spec.get_string("pulse", "dirac");
            PulseShape pulse = PulseShape::dirac();
            if (pulse_kind == "gaussian")
                pulse = PulseShape::gaussian(
                    signal_spec.get_double("pulse_width"));
            else if (pulse_kind != "dirac")
                throw config_error("pulse", "unknown pulse '" + pulse_kind + "'");
            const FriSignal signal = make_fri_signal(
                signal_spec.get_double_list("amplitudes"),
                signal_spec.get_double_list("delays"),
                signal_spec.get_double("period"), pulse);
            const auto k_max = static_cast<int>(ctx.config.get_u64(
                "k_max", signal.pulse_count() + 1));
            const TrigPolynomial filtered =
                filter_fri(signal, SosKernel::flat(k_max, signal.period));
            if (!(params.bias > sup_bound(filtered)))
                throw feasibility_error(
                    "encode: bias must exceed the filtered-signal bound " +
                    std::to_string(sup_bound(filtered)));
            record = encode_iftem(filtered, params, t0, t_end);
        } else if (kind == "bl") {
            signal_spec.restrict_keys({"signal", "coeffs", "omega_hz",
                                       "energy"});
            const BlSignal signal = make_bl_signal(
                signal_spec.get_double_list("coeffs"),
                signal_spec.get_double("omega_hz"),
                signal_spec.get_double("energy"));
            const double bound =
                bl_amplitude_bound(signal.energy_bound, signal.band_limit_hz)
                    .value;
            if (!(params.bias > bound))
                throw feasibility_error(
                    "encode: bias must exceed the amplitude bound " +
                    std::to_string(bound));
            record = encode_iftem_bl(signal, bound, params, t0, t_end);
        } else {
            throw config_error("signal", "unknown signal class '" + kind + "'");
        }

        std::vector<std::string> lines;
        const nlohmann::json header{{"schema_version", 1},
                                    {"bias", params.bias},
                                    {"kappa", params.kappa},
                                    {"delta", params.delta},
                                    {"start_time", t0},
                                    {"t_end", t_end},
                                    {"count", record.times.size()}};
        lines.push_back(header.dump());
        for (double t : record.times)
            lines.push_back(format_instant(t));
        write_lines(ctx.out_dir / "firing_times.txt", lines);
        write_manifest(ctx, "encode", 0, {"firing_times.txt"});
        std::cout << "encode: " << record.times.size() << " firing instants -> "
                  << (ctx.out_dir / "firing_times.txt").string() << "\n";
    });
}

int cli_main(int argc, const char *const *argv) {
    CLI::App app{"IF-TEM time-based quantization for FRI and bandlimited "
                 "signals: encoding, quantizer design, and Monte-Carlo "
                 "recovery studies"};
    app.require_subcommand(1);

    CliOptions options;

    const auto add_common = [&](CLI::App *sub, bool with_overrides) {
        sub->add_option("--config", options.config_path, "configuration file")
            ->required();
        sub->add_option("--out", options.out_dir, "output directory");
        if (with_overrides) {
            sub->add_option_function<std::uint64_t>(
                "--seed",
                [&](const std::uint64_t &v) { options.seed = v; },
                "seed override");
            sub->add_option_function<std::uint64_t>(
                "--trials",
                [&](const std::uint64_t &v) { options.trials = v; },
                "trial-count override");
        }
    };

    auto *fri_mse = app.add_subcommand(
        "fri-mse", "MSE vs quantizer bits for FRI signals, both samplers");
    add_common(fri_mse, true);
    auto *bl_range = app.add_subcommand(
        "bl-range", "firing-interval statistics vs band limit for BL signals");
    add_common(bl_range, true);
    auto *bl_mse = app.add_subcommand(
        "bl-mse", "MSE vs quantizer bits for BL signals, both samplers");
    add_common(bl_mse, true);
    auto *step_table = app.add_subcommand(
        "step-table", "quantizer step sizes vs pulse count and band limit");
    add_common(step_table, false);
    auto *encode = app.add_subcommand(
        "encode", "encode one signal into firing instants");
    add_common(encode, false);
    encode->add_option("--signal", options.signal_path, "signal spec file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfigError;
    }

    if (fri_mse->parsed())
        return cmd_fri_mse(options);
    if (bl_range->parsed())
        return cmd_bl_range(options);
    if (bl_mse->parsed())
        return cmd_bl_mse(options);
    if (step_table->parsed())
        return cmd_step_table(options);
    if (encode->parsed())
        return cmd_encode(options);
    return kExitConfigError;
}

} // namespace temq::cli
