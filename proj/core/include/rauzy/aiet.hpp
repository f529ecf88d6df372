#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rauzy/bigreal.hpp"
#include "rauzy/combinat.hpp"
#include "rauzy/iet.hpp"
#include "rauzy/numeric.hpp"
#include "rauzy/renorm.hpp"

namespace rauzy {

using RealVec = std::vector<BigReal>;
using RealInterval = BasicInterval<BigReal>;

/// Affine interval exchange: branch α maps I_α affinely with slope e^{ω_α};
/// domains are laid out in top order, images in bottom order.
class AIET {
 public:
  AIET() = default;
  /// Validates positivity and that both the domains and the images tile
  /// [0,1) within 2^-(bits-8). Never rescales ω.
  AIET(Perm perm, RealVec lengths, RealVec log_slope, BigReal::Precision bits);

  /// Skips the tiling check. For induction output, whose tiling holds by
  /// construction up to the accumulated rounding.
  static AIET trusted(Perm perm, RealVec lengths, RealVec log_slope, RealVec slopes,
                      BigReal::Precision bits);

  const Perm& perm() const noexcept { return perm_; }
  std::size_t d() const noexcept { return perm_.d(); }
  BigReal::Precision precision() const noexcept { return bits_; }
  const RealVec& lengths() const noexcept { return lengths_; }
  const RealVec& log_slope() const noexcept { return omega_; }
  /// e^{ω_α}.
  const RealVec& slopes() const noexcept { return slopes_; }

  RealInterval domain(Letter a) const;
  RealInterval image(Letter a) const;
  Letter letter_at(const BigReal& x) const;

 private:
  void layout();
  Perm perm_;
  RealVec lengths_, omega_, slopes_, left_, image_left_;
  BigReal::Precision bits_ = BigReal::kDefaultPrecision;
};

/// Precision is the largest input precision (at least the thread default).
AIET build_aiet(const Perm& perm, const RealVec& lengths, const RealVec& log_slope);
/// The IET itself with ω = 0.
AIET aiet_from_iet(const IET& t, BigReal::Precision bits);
/// Lengths ℓ and a direction ω; ω is shifted by the constant -log Σ ℓ e^ω so
/// that the images tile. Used to sample valid AIETs.
AIET aiet_with_shifted_slopes(const Perm& perm, const RealVec& lengths, RealVec log_slope);

BigReal aiet_evaluate(const AIET& f, const BigReal& x);

struct GietStep {
  AIET next;
  RVStep step;
  BigReal scale;  ///< length of the induction interval in the current unit
};

/// One Rauzy-Veech step of an affine map: first return to the induction
/// interval, rescaled to [0,1). Throws TieUndecidable when the two last
/// intervals agree to within 2^-(bits-16).
GietStep giet_rv_step(const AIET& f);

enum class InductionStatus { complete, tie, precision_exhausted, step_cap };
const char* to_string(InductionStatus s) noexcept;

/// State after n Zorich blocks of an affine induction.
struct AietLevel {
  Perm perm;
  RealVec lengths;      ///< normalized to the level's unit
  RealVec log_slope;
  BigReal log_scale;    ///< log |I^(n)| in the original unit
  std::uint64_t rv_steps = 0;
};

struct AietOrbitOptions {
  std::uint64_t max_rv_steps = 50'000'000;
  bool keep_cumulative = false;  ///< keep B^n at every level
};

struct AietOrbit {
  std::vector<AietLevel> levels;  ///< levels[0] is the input map
  RotationPath path;              ///< one run per completed block
  std::vector<IntMatrix> cumulative;  ///< B^n per level when requested
  IntVec heights;                 ///< h^n at the last level
  InductionStatus status = InductionStatus::complete;
  std::size_t blocks() const noexcept { return levels.size() - 1; }
};

/// Zorich blocks of the affine induction. Stops early with a status instead
/// of throwing when a tie cannot be decided or precision_valid fails.
AietOrbit aiet_orbit(const AIET& f, std::size_t n_blocks, const AietOrbitOptions& opt = {});

/// Smallest normalized length above 2^-(bits-32), and enough bits left for
/// the rounding amplified by rescaling: log2(1/scale) + log2(1/min ℓ) + 32 < bits.
bool precision_valid(const RealVec& lengths, const BigReal& scale, BigReal::Precision bits);

struct SlopeCocycleReport {
  std::size_t blocks = 0;
  double max_relative_deviation = 0;
  std::vector<double> per_block;   ///< max relative deviation at each level
  InductionStatus status = InductionStatus::complete;
  BigReal::Precision precision = 0;
};

/// Tracked log-slopes against (B^n)^T ω at every block.
SlopeCocycleReport log_slope_cocycle_check(const AIET& f, std::size_t n_blocks);

/// Builds an affine map with log-slope ω whose combinatorial rotation number
/// begins with `prefix`; `terminal_shape` fixes the lengths at the end of the
/// prefix up to the rescaling that makes the images tile. Runs backwards
/// from the end of the prefix with additions only; each run is undone in
/// closed form.
AIET aiet_over_path(const RotationPath& prefix, const RatVec& omega, const RatVec& terminal_shape,
                    BigReal::Precision bits);
/// Working precision at which the induction of aiet_over_path follows all
/// but the last run of `prefix`. Starts from the ratio of total length to
/// smallest length at block boundaries and doubles until the orbit agrees;
/// throws ResourceGuard past `cap` bits.
BigReal::Precision path_precision(const RotationPath& prefix, const RatVec& omega, const RatVec& terminal_shape,
                                  BigReal::Precision cap = 1u << 20);

/// Uses n_blocks + 1 Zorich blocks of `t` and the lengths of t at that level,
/// so that the first n_blocks blocks of the result coincide with those of t.
AIET aiet_over_iet(const IET& t, std::size_t n_blocks, const RatVec& omega, BigReal::Precision bits);

struct MeasureWeights {
  RatVec lambda_hat;             ///< normalized B^N 1
  double cone_spread = 0;        ///< sup-norm spread of normalized B^N columns
  std::size_t depth = 0;         ///< N, in blocks
  /// Measure of I_α^(n), unnormalized: (B^n)^{-1} λ̂ scaled so that the
  /// towers at each level have total mass 1.
  std::vector<RatVec> base_measure;
  /// h^(n)_α times base_measure; sums to 1 at each level.
  std::vector<RatVec> tower_weight;
};

struct MeasureOptions {
  double cone_tolerance = 1e-12;
};

/// Invariant measure of the conjugate IET estimated from the path of f.
/// Throws ResourceGuard when the cone has not contracted below the tolerance.
MeasureWeights invariant_measure_weights(const RotationPath& path, std::size_t n_blocks,
                                         const MeasureOptions& opt = {});
MeasureWeights invariant_measure_weights(const AIET& f, std::size_t n_blocks,
                                         const MeasureOptions& opt = {});

struct DimensionLevel {
  std::size_t n = 0;
  std::uint64_t rv_steps = 0;
  double log10_interval = 0;         ///< log10 |I^(n)(f)|
  std::vector<double> ratio;         ///< per letter log μ̂(I_α) / log |I_α(f)|
  double estimate = 0;               ///< tower-weighted mean of the ratios
};

struct DimensionTrace {
  std::vector<DimensionLevel> levels;
  InductionStatus status = InductionStatus::complete;
  BigReal::Precision precision = 0;
  double cone_spread = 0;
};

/// Local-dimension ratios at levels 1..n_blocks. The measure is estimated
/// from `lookahead` further blocks of the same path.
DimensionTrace local_dimension_estimates(const AIET& f, std::size_t n_blocks, std::size_t lookahead = 12,
                                         const MeasureOptions& opt = {});

/// Ratios on floors f^j(I_α^(n)) drawn from the estimated invariant measure
/// (letter by tower weight, j uniform), so the points are μ-typical rather
/// than pinned at the left end of the induction interval.
struct FloorDimension {
  std::size_t n = 0;
  double median = 0;
  double q10 = 0;
  double q90 = 0;
  std::size_t samples = 0;
};
FloorDimension floor_sampled_dimension(const AIET& f, std::size_t n_blocks, std::size_t samples,
                                       std::uint64_t seed, std::size_t lookahead = 12,
                                       const MeasureOptions& opt = {});

void write_dimension_csv(std::ostream& os, const DimensionTrace& trace);

}  // namespace rauzy
