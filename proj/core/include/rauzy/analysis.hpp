#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rauzy/aiet.hpp"
#include "rauzy/combinat.hpp"
#include "rauzy/iet.hpp"
#include "rauzy/numeric.hpp"
#include "rauzy/renorm.hpp"

namespace rauzy {

/// Floors f^k(base), 0 <= k < height, each an interval on which f is a
/// single branch.
template <class Num>
struct BasicRohlinTower {
  BasicInterval<Num> base;
  BigInt height;
  std::vector<BasicInterval<Num>> floors;
  std::optional<Letter> letter;  ///< letter of the base at its level, if any
  std::size_t level = 0;
};
using RohlinTower = BasicRohlinTower<Rational>;
using AffineRohlinTower = BasicRohlinTower<BigReal>;

/// Two floors that meet: tower and floor index of each, and the overlap.
struct OverlapWitness {
  std::size_t tower_a = 0, floor_a = 0;
  std::size_t tower_b = 0, floor_b = 0;
  std::string overlap;  ///< "[left, right)" in decimal or p/q form
};

template <class Num>
struct BasicTowerSystem {
  std::size_t level = 0;
  std::vector<BasicRohlinTower<Num>> towers;
  bool disjoint = false;
  std::optional<OverlapWitness> overlap;
  Num covered;  ///< total length of all floors
};
using TowerSystem = BasicTowerSystem<Rational>;
using AffineTowerSystem = BasicTowerSystem<BigReal>;

struct TowerOptions {
  std::uint64_t max_floors = 1'000'000;  ///< over all towers; ResourceGuard beyond
};

/// The d towers over I_α^(n) with heights h^(n)_α after n Zorich blocks.
/// Floors are pushed forward one branch at a time; a floor that straddles
/// a discontinuity throws NotRenormalizable. Disjointness is checked by
/// sorting all floors.
TowerSystem towers_at_level(const IET& t, std::size_t n_blocks, const TowerOptions& opt = {});
AffineTowerSystem towers_at_level(const AIET& f, std::size_t n_blocks, const TowerOptions& opt = {});

/// Tower over an arbitrary base with a given height, for inputs that do not
/// come from induction. Stops early (fewer floors than the height) when a
/// floor straddles a discontinuity.
RohlinTower tower_over(const IET& t, const Interval& base, std::uint64_t height);
/// First pair of floors (within one tower or across towers) that overlap.
std::optional<OverlapWitness> find_overlap(const std::vector<RohlinTower>& towers);

/// Letter of the level-n tower containing x, found by walking the orbit of x
/// backwards until it enters I^(n). Nullopt when more than max_steps are
/// needed.
std::optional<Letter> tower_containing(const IET& t, const OrbitRecord& rec, std::size_t n, const Rational& x,
                                       std::uint64_t max_steps = 1'000'000);

/// Empirical frequency of each level-n tower over uniformly sampled points;
/// for an IET it estimates the tower mass h_α |I_α^(n)|.
std::vector<double> tower_frequencies(const IET& t, std::size_t n, std::size_t samples, std::uint64_t seed);

/// Σ |floor|^s over all floors.
BigReal s_content(const std::vector<RohlinTower>& towers, double s, BigReal::Precision bits = 256);
BigReal s_content(const std::vector<AffineRohlinTower>& towers, double s);
BigReal s_content(const RealVec& lengths, double s);

/// Lengths g σ^i, L <= i < M: the pieces T^{ih}((l, T^h l)) of a thinned
/// tower base when T^h contracts uniformly by σ.
RealVec geometric_thinning(const BigReal& first_gap, std::size_t L, std::size_t M, const BigReal& sigma);

/// The same pieces computed on an actual branch: `level_map` is the
/// renormalized map and the base is the domain of `letter`. Pieces are
/// φ^i((l, φ(l))) for L <= i < M, where φ is the branch; stops when a piece
/// leaves the base.
RealVec thinned_base(const AIET& level_map, Letter letter, std::size_t L, std::size_t M);

/// C(n) for the generic-condition scan.
struct Schedule {
  std::string id;
  std::function<BigInt(std::size_t)> value;
  /// Σ 1/(n C(n)) diverges; known only for built-in schedules.
  std::optional<bool> diverges;
};
/// "log2": ⌈log₂(n+2)⌉ (diverges); "const": 1 (diverges); "linear": n (converges).
Schedule builtin_schedule(const std::string& id);
Schedule custom_schedule(std::string id, std::function<BigInt(std::size_t)> value);

/// Data of the scanned map at one level with π^(n) of canonical rotation shape.
struct ScanVisit {
  std::size_t n = 0;
  Perm perm;
  Letter last_bottom = 0;       ///< β*
  BigInt target;                ///< n C(n)
  Rational min_ratio;           ///< min_{α≠β*} λ_α / λ_β*
  Rational min_length;          ///< min_{α≠β*} λ_α, normalized
  Rational height_balance;      ///< min h / max h
  bool lengths_ok = false;      ///< condition on λ_α / λ_β*
  bool balanced_ok = false;     ///< λ_α > c0
  bool heights_ok = false;      ///< h ratio > c0
  bool hit() const noexcept { return lengths_ok && balanced_ok && heights_ok; }
};

struct GenericConditionReport {
  Rational c0;
  std::string schedule;
  std::optional<bool> schedule_diverges;
  std::size_t blocks = 0;              ///< blocks actually scanned
  std::vector<ScanVisit> visits;       ///< every level with canonical rotation shape
  std::vector<std::size_t> hits;       ///< levels satisfying all four conditions
  std::vector<std::string> warnings;
};

/// Scans levels 1..max_blocks of the Zorich orbit with exact rationals. The
/// shape test compares monodromies, so any labeling of the canonical
/// rotation perm counts. Requires 0 < c0 < 1/(10d).
GenericConditionReport generic_condition_scan(const IET& t, const Rational& c0, const Schedule& schedule,
                                              std::size_t max_blocks);

/// Iterates of I_β*^(n) under the level-n map, grouped into runs that stay
/// inside one letter's interval.
struct AdjacencyRun {
  Letter letter = 0;
  std::uint64_t first = 0;  ///< index i of the first iterate in the run
  std::uint64_t count = 0;  ///< iterates wholly inside I_letter
  bool adjacent = false;    ///< each iterate shares an endpoint with the next, exactly
};
struct AdjacencyStructure {
  std::size_t n = 0;
  Letter last_bottom = 0;
  std::vector<std::uint64_t> markers;  ///< 0, then the indices that straddle two letters
  std::vector<AdjacencyRun> runs;
  std::uint64_t total_iterates = 0;    ///< up to the first return into I_β*
  bool certified = false;              ///< every run adjacent
  /// Count for a letter (0 if the orbit never stayed inside it).
  std::uint64_t count(Letter a) const;
};

/// Requires π^(n) of canonical rotation shape; DomainError otherwise.
AdjacencyStructure adjacency_structure(const IET& t, std::size_t n);
AdjacencyStructure adjacency_structure(const OrbitRecord& rec, std::size_t n);

/// Membership in the set of lengths λ (normalized) with
/// min{c0, 1/(nC(n))} > λ_β* − λ_δ* > 0 and min λ > c0, where δ* is the
/// last top letter of the bottom-move predecessor of the canonical perm.
struct HatAMembership {
  bool member = false;
  bool bottom_type = false;  ///< λ_β* > λ_δ*, i.e. the predecessor is of bottom type
};
HatAMembership hat_A_membership(const RatVec& lambda, std::size_t n, const Rational& c0, const Schedule& C,
                                const Perm& canonical);

/// Smallest min_{α≠β*} λ'_α / (n C(n) λ'_β*) over members of the set
/// after one Rauzy-Veech step from the predecessor, from `samples` uniform
/// points. Nullopt when no sample is a member.
std::optional<double> measure_lengths_constant(const Perm& canonical, std::size_t n, const Rational& c0,
                                               const Schedule& C, std::size_t samples, std::uint64_t seed);

/// Shortest path in the Rauzy diagram that starts with a top move, ends at
/// the bottom-move predecessor of `canonical` through a bottom move, and has
/// a positive matrix. Breadth-first over (perm, sign pattern).
struct GammaPath {
  Perm start;
  std::vector<MoveType> moves;
  std::vector<Perm> perms;  ///< start, then the perm after each move
  IntMatrix matrix;         ///< product of the step matrices
};
GammaPath find_gamma_path(const Perm& canonical, std::size_t max_states = 5'000'000);

/// Outcome of one criterion condition.
enum class Verdict { pass, fail, structural, skipped };
const char* to_string(Verdict v) noexcept;

struct CriterionEntry {
  std::size_t level = 0;
  Letter letter = 0;
  bool designated = false;   ///< α ≠ β* with the largest |ω_α^(n)|
  BigInt height;
  Verdict cond1 = Verdict::skipped;  ///< floors disjoint
  Verdict cond2 = Verdict::skipped;  ///< return power continuous on the base
  Verdict cond3 = Verdict::skipped;  ///< tower mass above the floor
  Verdict cond4 = Verdict::skipped;  ///< |e^{ω_α^(n)} − 1| above the floor
  Verdict cond5 = Verdict::skipped;  ///< rigidity count reaches the target
  double tower_mass = 0;
  double slope_gap = 0;
  std::uint64_t rigidity = 0;        ///< M_n, certified lower bound
  bool rigidity_capped = false;      ///< search stopped at the cap or target
  std::optional<BigInt> rigidity_target;
  double rigidity_ratio = 0;         ///< M_n / log h_n
  std::optional<OverlapWitness> overlap;
};

struct CriterionReport {
  std::vector<CriterionEntry> entries;
  double mass_lower_bound = 0;   ///< min tower mass over designated entries
  double slope_gap_inf = 0;      ///< min slope gap over designated entries
  bool applicable = false;       ///< some designated entry has a slope gap
  std::string note;
  InductionStatus status = InductionStatus::complete;
  std::size_t levels_computed = 0;
};

struct CriterionOptions {
  double mass_floor = 1.0 / 4096.0;   ///< c0² with c0 = 1/64
  double slope_floor = 1e-6;
  std::uint64_t max_floors = 1'000'000;
  std::uint64_t max_rigidity = 1'000'000;
  /// M(n) target; the rigidity search stops once it is reached.
  std::function<BigInt(std::size_t)> rigidity_target;
  /// Lengths of the IET with the same path; tower masses are then exact.
  std::optional<RatVec> conjugate_lengths;
  /// Otherwise masses come from the path: this many blocks beyond the deepest level.
  std::size_t measure_lookahead = 60;
  MeasureOptions measure;
};

/// Evaluates the five conditions on the towers over I_α^(n)(f) at each
/// requested level, for every letter. Nothing is extrapolated beyond the
/// computed levels.
CriterionReport check_criterion(const AIET& f, const std::vector<std::size_t>& levels,
                                const CriterionOptions& opt = {});

/// Largest k with φ^j(F) ∩ ... ∩ F nonempty for j <= k, where φ is the
/// branch of the level map on F = I_letter. Inward rounding; stops at `cap`.
struct RigidityCount {
  std::uint64_t count = 0;
  bool capped = false;
};
RigidityCount rigidity_count(const AIET& level_map, Letter letter, std::uint64_t cap);
RigidityCount rigidity_count(const IET& level_map, Letter letter, std::uint64_t cap);

void write_criterion_csv(std::ostream& os, const CriterionReport& rep);
void write_scan_csv(std::ostream& os, const GenericConditionReport& rep);

}  // namespace rauzy
