#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rauzy/io.hpp"

namespace rauzy::cli {

/// Everything a command reads. Flags fill it first, then a JSON config file
/// overrides any key it names.
struct ExperimentConfig {
  std::string command;

  // inputs
  std::size_t d = 0;
  std::string perm;            ///< "A B C / C A B"
  bool rotation = false;       ///< use the canonical rotation perm of size d
  std::string input;           ///< JSON descriptor file (perm, IET or AIET)
  std::string map;             ///< PL map JSON file
  std::string preset;          ///< golden, golden-two-break, ...
  std::string lambda;          ///< comma separated rationals
  std::string alpha;           ///< number for cf

  // sampling
  std::size_t samples = 1;
  std::optional<std::uint64_t> seed;
  std::size_t lambda_bits = 4096;

  // precision and depth
  std::size_t precision_bits = 256;
  std::size_t n_blocks = 30;
  std::uint64_t max_iter = 10'000'000;
  std::size_t n = 3;           ///< partition level / number of quotients
  std::size_t lookahead = 12;
  std::size_t window = 0;      ///< ∞-completeness window, 0 = whole path
  std::string x0 = "0";

  // scanner and criterion
  std::string c0 = "1/64";
  std::string schedule = "log2";
  std::vector<std::size_t> levels;
  std::string omega = "cs";    ///< zero, cs (central-stable, not stable), s (stable)
  std::string clock = "block"; ///< block or rv

  // output
  std::string out;             ///< directory; empty writes the primary output to stdout
  std::string format = "json"; ///< json or csv
  unsigned jobs = 1;

  Json to_json() const;
  /// Overrides fields named in `j`; unknown keys are a DomainError.
  void apply_json(const Json& j);
  /// Limits positive, seed present for randomized commands, enums valid.
  void validate() const;
  bool randomized() const;
};

/// Default precision: RAUZY_PRECISION when set and valid, else 256.
std::size_t precision_from_env();

}  // namespace rauzy::cli
