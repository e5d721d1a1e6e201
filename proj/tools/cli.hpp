// SPDX-License-Identifier: Apache-2.0

#ifndef IRSMIMO_TOOLS_CLI_HPP
#define IRSMIMO_TOOLS_CLI_HPP

namespace irsmimo::tools {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

/// Parses the command line, runs one experiment and writes out/<experiment>/<label>/.
int run_cli(int argc, const char *const *argv);

} // namespace irsmimo::tools

#endif
