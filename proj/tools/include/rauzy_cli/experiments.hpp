#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rauzy/analysis.hpp"
#include "rauzy/io.hpp"

namespace rauzy::cli {

/// Uniform λ on the simplex from stream `index` of `seed`.
IET sample_iet(const Perm& p, std::uint64_t seed, std::uint64_t index, std::size_t lambda_bits);

enum class SlopeDirection { zero, central_not_stable, stable };
SlopeDirection parse_direction(const std::string& id);

/// Log-slope vector of sup-norm 1 (or 0) in the requested subspace of a
/// rotation-type IET. A central direction is a random rational combination
/// of the λ^⊥ basis, redrawn until it leaves the stable line.
RatVec sample_direction(const IET& t, SlopeDirection kind, std::mt19937_64& rng);

/// Bits for aiet_over_iet(t, n_blocks, omega, ·): the larger of the bit
/// length of the largest height plus a margin and path_precision.
std::size_t affine_bits_for(const IET& t, std::size_t n_blocks, const RatVec& omega, std::size_t margin = 192);

/// One scanner hit checked by adjacency and by the criterion on an affine
/// map over the same path.
struct HitCheck {
  std::size_t n = 0;
  BigInt target;                 ///< n C(n) - 2
  bool adjacency_certified = false;
  bool adjacency_counts_ok = false;  ///< every letter but β* reaches the target
  std::vector<std::uint64_t> counts;
  std::optional<CriterionReport> criterion;
  std::string error;             ///< set when the affine map could not be built
  /// cond1..cond4 pass (or hold structurally) and M reaches the target on
  /// the designated letter.
  bool criterion_ok() const;
};

struct ScanSample {
  std::uint64_t index = 0;
  GenericConditionReport scan;
  std::vector<HitCheck> checks;
  std::string status = "complete";
};

struct ScanSampleOptions {
  Rational c0;
  Schedule schedule;
  std::size_t n_blocks = 0;
  std::size_t lambda_bits = 4096;
  bool check_hits = false;        ///< run adjacency and the criterion on every hit
  std::size_t max_checked_hits = 0;  ///< 0 = all
};

ScanSample run_scan_sample(const Perm& p, std::uint64_t seed, std::uint64_t index, const ScanSampleOptions& opt);

Json to_json(const HitCheck& h);
Json to_json(const ScanSample& s);

/// Runs `count` independent instances on `jobs` threads; results are stored
/// by index, so the order never depends on scheduling.
template <class Result>
std::vector<Result> run_instances(std::size_t count, unsigned jobs, const std::function<Result(std::size_t)>& task);

}  // namespace rauzy::cli

#include "rauzy_cli/experiments_impl.hpp"
