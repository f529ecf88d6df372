#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rauzy::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitResource = 3;

/// Parses the arguments, runs one subcommand and returns its exit code.
/// The primary output goes to `out` unless --out names a directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace rauzy::cli
