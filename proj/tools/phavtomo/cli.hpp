#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace phav::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kNumerical = 3;

/// Runs one phavtomo invocation. args excludes the program name. Data goes to
/// files or `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace phav::cli
