// cli.hpp: command-line entry point: rabi-floquet <spectrum|dynamics|fourier|sweep> [options]
//
// Exit codes: 0 success, 1 configuration or usage error (nothing written),
// 2 numerical failure (sweeps still write every row, failed ones marked).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rabi_floquet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace rabi_floquet
