#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace fitzkit::app {

/// Exit codes: 0 all assertions hold, 1 a mathematical assertion failed,
/// 2 input or configuration error.
inline constexpr int kOk = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kInputError = 2;

/// Parses the command line and runs one subcommand. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fitzkit::app
