#pragma once

#include <ostream>

namespace poolsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitRuntime = 4;

/// Entry point behind the poolsim binary: build-cache, run and validate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poolsim::cli
