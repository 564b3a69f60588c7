// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace temq::cli {

/// Exit-code contract shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumericalFailure = 4;

struct CliOptions {
    std::string config_path;
    std::string signal_path; // encode only
    std::string out_dir = "temq_out";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
};

int cmd_fri_mse(const CliOptions &options);
int cmd_bl_range(const CliOptions &options);
int cmd_bl_mse(const CliOptions &options);
int cmd_encode(const CliOptions &options);
int cmd_step_table(const CliOptions &options);

/// Full argument parsing and dispatch; returns the process exit code.
int cli_main(int argc, const char *const *argv);

} // namespace temq::cli
