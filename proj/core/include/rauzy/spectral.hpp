#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rauzy/combinat.hpp"
#include "rauzy/iet.hpp"
#include "rauzy/numeric.hpp"

namespace rauzy {

/// Linear subspace given by a rational basis.
struct Subspace {
  std::vector<RatVec> basis;
  std::size_t dim() const noexcept { return basis.size(); }
  /// Exact membership test by rank.
  bool contains(const RatVec& v) const;
};

/// Orthogonal projection onto the kernel of the intersection matrix, solved
/// exactly through the Gram system of the integer kernel basis.
RatVec project_kernel(const RatVec& omega, const Perm& p);

struct KernelReturn {
  std::size_t block;        ///< level n with π^(n) = π^(0)
  bool lengths_route;       ///< projection of (B^n)^{-1} ω equals that of ω
  bool slopes_route;        ///< projection of (B^n)^T ω equals that of ω
};

struct KernelInvarianceReport {
  std::size_t blocks = 0;
  std::vector<KernelReturn> returns;
  bool lengths_route_pass() const;
  bool slopes_route_pass() const;
  bool all_pass() const { return lengths_route_pass() && slopes_route_pass(); }
};

/// Checks invariance of the kernel projection at every return of the
/// permutation to its starting value within `n_blocks` Zorich blocks.
KernelInvarianceReport kernel_projection_invariance_check(const IET& t, const RatVec& omega,
                                                          std::size_t n_blocks);

/// Closed-form stable spaces for rotation-type datums.
struct StableSpaces {
  Subspace stable;          ///< Ker(Ω)^⊥ ∩ λ^⊥, dimension 1
  Subspace central_stable;  ///< λ^⊥, dimension d - 1
};
StableSpaces rotation_stable_spaces(const IET& t);

/// Ker(Ω)^⊥ as the nullspace of the kernel basis.
Subspace kernel_complement(const Perm& p);

enum class SlopeClass { in_stable, in_central_not_stable, outside_central };
const char* to_string(SlopeClass c) noexcept;
SlopeClass log_slope_membership(const RatVec& omega, const IET& t);

/// per_zorich_block counts Gauss-map steps when d = 2 (one partial quotient
/// per block); per_rv_step counts single subtractions.
enum class LyapunovClock { per_zorich_block, per_rv_step };
const char* to_string(LyapunovClock c) noexcept;

struct LyapunovOptions {
  std::size_t bits = 2048;     ///< bit size of the random length numerators
  unsigned jobs = 1;
};

struct LyapunovEstimate {
  double theta_top = 0;          ///< under `normalization`
  double theta_per_block = 0;
  double theta_per_rv_step = 0;
  std::size_t n_blocks = 0;
  std::size_t samples = 0;       ///< samples that completed
  std::size_t skipped = 0;       ///< samples stopped by a tie or guard
  LyapunovClock normalization = LyapunovClock::per_zorich_block;
  std::vector<double> per_sample_block;   ///< log max h / n_blocks
  std::vector<double> per_sample_rv;      ///< log max h / rv steps
};

/// Monte Carlo estimate of the top exponent from log max_α h^(n)_α, with λ
/// sampled from Lebesgue measure on the simplex.
LyapunovEstimate lyapunov_top(std::size_t d, const Perm& start, std::size_t n_blocks, std::size_t samples,
                              std::uint64_t seed, const LyapunovOptions& opt = {},
                              LyapunovClock clock = LyapunovClock::per_zorich_block);

/// Natural log of a positive big integer.
double log_bigint(const BigInt& x);

void write_lyapunov_csv(std::ostream& os, const LyapunovEstimate& est);

}  // namespace rauzy
