// SPDX-License-Identifier: Apache-2.0
#include "temq/cli/commands.hpp"

int main(int argc, char **argv) { return temq::cli::cli_main(argc, argv); }
