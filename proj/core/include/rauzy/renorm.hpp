#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rauzy/combinat.hpp"
#include "rauzy/iet.hpp"
#include "rauzy/numeric.hpp"

namespace rauzy {

/// One Rauzy-Veech step: the type and the two competing letters.
struct RVStep {
  MoveType type;
  Letter winner;
  Letter loser;

  /// I + E_{winner, loser}.
  IntMatrix matrix(std::size_t d) const;
};

/// Type of the next step. Throws NotRenormalizable on a tie.
MoveType rv_type(const IET& t);
/// One normalized Rauzy-Veech step.
std::pair<IET, RVStep> rv_step(const IET& t);
/// The predecessor of t reached by a move of the given type (λ = A λ',
/// normalized), or nullopt when the combinatorics admit none.
std::optional<IET> rv_predecessor(const IET& t, MoveType type);

/// A maximal run of Rauzy-Veech steps of one type.
struct ZorichBlock {
  MoveType type;
  std::uint64_t z;      ///< number of Rauzy-Veech steps
  Letter winner;        ///< constant through the block
  Letter last_loser;
  Perm perm_before;
  Perm perm_after;
  std::uint64_t first_step;  ///< Rauzy-Veech index of the first step in the block
  IntMatrix matrix;     ///< product of the z step matrices (empty unless recorded)
};

/// Induction state after n blocks. Lengths are kept as integer numerators
/// over the orbit's common denominator.
struct OrbitLevel {
  Perm perm;
  IntVec length_num;  ///< ℓ^n times the common denominator
  IntVec heights;     ///< h^n = (B^n)^T 1
  IntMatrix cumulative;  ///< B^n (empty unless recorded)
  std::uint64_t rv_steps = 0;
};

struct OrbitOptions {
  bool record_levels = true;    ///< keep every level, not just the last
  bool record_matrices = true;  ///< keep block and cumulative matrices
  std::size_t max_bits = 1'000'000;        ///< height entry guard
  std::uint64_t max_rv_steps = UINT64_MAX;  ///< Rauzy-Veech step guard
  /// On a tie, return the record built so far instead of throwing.
  bool stop_on_tie = false;
};

class OrbitRecord {
 public:
  const Perm& start_perm() const noexcept { return levels_.front().perm; }
  const RatVec& start_lambda() const noexcept { return lambda0_; }
  const BigInt& denominator() const noexcept { return den_; }

  /// Number of completed blocks.
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<ZorichBlock>& blocks() const noexcept { return blocks_; }
  /// Recorded levels; with record_levels off only 0 and the last remain.
  const std::vector<OrbitLevel>& levels() const noexcept { return levels_; }
  const OrbitLevel& level(std::size_t n) const;
  const OrbitLevel& last() const { return levels_.back(); }

  /// Unnormalized lengths ℓ^n (sum = |I^n|).
  RatVec lengths(std::size_t n) const;
  /// λ^n = ℓ^n / |ℓ^n|.
  RatVec lambda(std::size_t n) const;
  /// |I^n| as an exact rational.
  Rational interval_length(std::size_t n) const;

  /// Set when the run stopped early on a tie (stop_on_tie); the step index
  /// where the tie was met.
  const std::optional<std::uint64_t>& tie_step() const noexcept { return tie_step_; }

 private:
  friend OrbitRecord orbit(const IET&, std::size_t, const OrbitOptions&);
  RatVec lambda0_;
  BigInt den_;
  std::vector<ZorichBlock> blocks_;
  std::vector<OrbitLevel> levels_;
  bool all_levels_ = true;
  std::optional<std::uint64_t> tie_step_;
};

/// One Zorich block from T, normalized. Throws NotRenormalizable when the
/// type after the block cannot be decided.
std::pair<IET, ZorichBlock> zorich_step(const IET& t);

OrbitRecord orbit(const IET& t, std::size_t n_blocks, const OrbitOptions& opt = {});

/// Combinatorial rotation number as runs of arcs: block k is z_k repetitions
/// of moves of one type starting at perm_before.
struct PathRun {
  Perm perm;
  MoveType type;
  std::uint64_t z;
  friend bool operator==(const PathRun&, const PathRun&) = default;
};
using RotationPath = std::vector<PathRun>;

struct PathArc {
  Perm perm;
  MoveType type;
  Letter winner;
  Letter loser;
};

RotationPath rotation_path(const IET& t, std::size_t n_blocks);
RotationPath rotation_path(const OrbitRecord& rec);
/// Winner of a run of one move type and its losers in the order they lose;
/// after the last loser the cycle starts again.
struct RunCycle {
  Letter winner;
  std::vector<Letter> losers;
};
RunCycle run_cycle(const Perm& p, MoveType t);

/// Individual arcs of a path, at most `max_arcs` of them.
std::vector<PathArc> expand_path(const RotationPath& path, std::size_t max_arcs);
/// Product of the step matrices along a path.
IntMatrix path_matrix(const RotationPath& path);
/// Every letter wins at least once within the first `window` arcs.
bool is_infinity_complete(const RotationPath& path, std::size_t window);

/// One row per block: n, z, type, winner, last loser, perm, λ^n, h^n, log10 max h.
void write_orbit_csv(std::ostream& os, const OrbitRecord& rec);

}  // namespace rauzy
