#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rauzy/aiet.hpp"
#include "rauzy/bigreal.hpp"
#include "rauzy/numeric.hpp"

namespace rauzy {

/// Piecewise-linear orientation-preserving circle homeomorphism.
///
/// Pieces are [b_i, b_{i+1}) with b_0 = 0 and b_k = 1; the lift on [0,1) is
/// F(x) = shift + Σ_{j<i} s_j (b_{j+1} - b_j) + s_i (x - b_i), so F(0) = shift.
/// Breaks with equal slopes on both sides are allowed (0 is always listed).
class PLCircleMap {
 public:
  PLCircleMap() = default;
  /// Validates: breaks strictly increasing in [0,1) starting at 0, slopes
  /// positive, Σ s_i |piece_i| = 1 within 2^-(bits-8), 0 <= shift < 1.
  PLCircleMap(RealVec breaks, RealVec slopes, BigReal shift, BigReal::Precision bits);

  static PLCircleMap rotation(const BigReal& alpha, BigReal::Precision bits);

  std::size_t pieces() const noexcept { return breaks_.size(); }
  const RealVec& breaks() const noexcept { return breaks_; }
  const RealVec& slopes() const noexcept { return slopes_; }
  const BigReal& shift() const noexcept { return shift_; }
  BigReal::Precision precision() const noexcept { return bits_; }

  /// Piece containing x in [0,1), right-continuous.
  std::size_t piece_at(const BigReal& x) const;
  /// Lift on the whole line: F(x + 1) = F(x) + 1.
  BigReal lift(const BigReal& x) const;
  /// f(x) in [0,1).
  BigReal operator()(const BigReal& x) const;
  /// The point of [0,1) mapped to y.
  BigReal preimage(const BigReal& y) const;

 private:
  void layout();
  RealVec breaks_, slopes_, cum_;  // cum_[i] = F(b_i) - shift
  BigReal shift_;
  BigReal::Precision bits_ = BigReal::kDefaultPrecision;
};

/// Fractional part in [0,1).
BigReal frac(const BigReal& x);

/// f ∘ g; adjacent pieces with slopes equal to within 2^-(bits-16) merge,
/// except at 0.
PLCircleMap compose(const PLCircleMap& f, const PLCircleMap& g);
PLCircleMap inverse(const PLCircleMap& f);
/// h ∘ f ∘ h^{-1}.
PLCircleMap conjugate(const PLCircleMap& f, const PLCircleMap& h);

/// Interval exchange obtained by cutting the circle at 0 and at the preimage
/// of 0: pieces in their natural order on top; on the bottom the pieces from
/// that preimage onwards come first. ω holds the log-slopes.
AIET pl_to_aiet(const PLCircleMap& f);

/// Descriptor of a piecewise-C² circle map for the mean nonlinearity: per
/// branch the interval and the first two derivatives.
struct C2Branch {
  double left = 0;
  double right = 0;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};
using PiecewiseC2Map = std::vector<C2Branch>;

/// Σ over branches of ∫ D log Df = ∫ D²f / Df, by adaptive Gauss-Kronrod
/// quadrature. Throws DomainError when Df <= 0 somewhere on a sample grid.
double mean_nonlinearity(const PiecewiseC2Map& f);
/// Exactly 0: log Df is constant on every piece.
double mean_nonlinearity(const PLCircleMap& f);

struct RotationNumber {
  BigReal estimate;      ///< F^n(0) / n
  BigReal error_bound;   ///< 1 / n
};
RotationNumber rotation_number(const PLCircleMap& f, std::uint64_t n_iter);

/// α = [a_1, a_2, ...] = 1/(a_1 + 1/(a_2 + ...)), no integer part.
/// Convergents p_k/q_k with p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1.
struct CFExpansion {
  std::vector<BigInt> a;  ///< a_1 .. a_n
  std::vector<BigInt> p;  ///< p_0 .. p_n
  std::vector<BigInt> q;  ///< q_0 .. q_n
  bool terminated = false;  ///< rational input whose expansion ended

  std::size_t size() const noexcept { return a.size(); }
  /// q_k for k >= -1.
  BigInt q_at(long k) const;
  BigInt p_at(long k) const;
};

/// Exact expansion; stops early when the rational ends.
CFExpansion continued_fraction(const Rational& alpha, std::size_t n);
/// Gauss map on a one-ulp enclosure of α with directed rounding. Throws
/// PrecisionExhausted when a quotient is no longer determined; the message
/// carries the trusted prefix.
CFExpansion continued_fraction(const BigReal& alpha, std::size_t n);
/// Longest prefix (at most n quotients) that the enclosure determines.
CFExpansion trusted_continued_fraction(const BigReal& alpha, std::size_t n);

/// Orbit of a base point under the lift, cached.
class CircleOrbit {
 public:
  CircleOrbit(const PLCircleMap& f, BigReal x0, std::uint64_t max_iterations = 10'000'000);
  /// F^k(x0) on the lift.
  const BigReal& at(std::uint64_t k);
  /// Comparison tolerance for F^k(x0) after k steps.
  BigReal tolerance(std::uint64_t k) const;
  const PLCircleMap& map() const noexcept { return f_; }

 private:
  PLCircleMap f_;
  RealVec lifts_;
  std::uint64_t max_;
};

/// Continued fraction of ρ(f) from the orbit of 0: a_k is the largest j for
/// which (p_{k-2} + j p_{k-1}) / (q_{k-2} + j q_{k-1}) stays on the side of
/// p_{k-2}/q_{k-2}, decided by the sign of F^q(0) - p. Throws DomainError
/// when F^q(0) - p is within the tolerance (apparently rational ρ) and
/// ResourceGuard when an iterate beyond the budget is needed.
CFExpansion rotation_continued_fraction(const PLCircleMap& f, std::size_t n,
                                        std::uint64_t max_iterations = 10'000'000);

/// Arc from x_start to x_end in the positive direction; indices are orbit
/// times of the base point.
struct CircleArc {
  std::uint64_t start_index = 0;
  std::uint64_t end_index = 0;
  BigReal start;    ///< position in [0,1)
  BigReal length;
};

struct DynamicalPartition {
  BigReal x0;
  std::size_t n = 0;
  CFExpansion cf;                     ///< n quotients
  std::vector<CircleArc> long_arcs;   ///< I_{n-1}^i, i < q_n
  std::vector<CircleArc> short_arcs;  ///< I_n^j, j < q_{n-1}
  BigReal covering_error;             ///< |Σ lengths - 1|
  BigReal min_gap;                    ///< smallest arc length
};

/// Arcs I_m^i = f^i(I_m(x0)) with I_m(x0) = [x0, f^{q_m} x0) for even m and
/// [f^{q_m} x0, x0) for odd m. Checks index-exact cyclic adjacency and the
/// covering; throws PrecisionExhausted when positions cannot be separated.
DynamicalPartition dynamical_partition(const PLCircleMap& f, const BigReal& x0, std::size_t n,
                                       std::uint64_t max_iterations = 10'000'000);

struct RefinementReport {
  std::size_t n = 0;
  std::size_t arcs_checked = 0;
  BigInt quotient;          ///< a_{n+1}
  BigReal min_margin;       ///< smallest certified gap between consecutive points
  bool holds = false;
};

/// I_{n-1}^i minus I_{n+1}^i is the union of the a_{n+1} iterates
/// I_n^{i + q_{n-1} + j q_n}, j < a_{n+1}, each adjacent to the next, for
/// every i < q_n. Index arithmetic is exact; the positional order of the
/// shared endpoints is certified against the orbit tolerance.
RefinementReport check_refinement(const PLCircleMap& f, const BigReal& x0, std::size_t n,
                                  std::uint64_t max_iterations = 10'000'000);

/// A branch of the first return map as a PL map on an interval of the lift.
struct ReturnBranchPL {
  std::uint64_t time = 0;
  BigInt turns;            ///< p subtracted so the image lands near x0
  RealInterval domain;     ///< lifted coordinates around x0
  RealVec cuts;            ///< left ends of the linear pieces
  RealVec slopes;          ///< products of the slopes of f along the orbit
  RealVec images;          ///< image of each cut, lifted, minus `turns`
};

struct CircleRenormalization {
  std::size_t n = 0;
  BigReal x0;
  ReturnBranchPL on_short;  ///< f^{q_{n-1}} on I_n(x0)
  ReturnBranchPL on_long;   ///< f^{q_n} on I_{n-1}(x0)
  std::size_t sampled = 0;
  BigReal max_sample_error;
};

/// Two-branch first return map to I_{n-1}(x0) ∪ I_n(x0). Checked on
/// `samples` points by iterating f until the orbit comes back; throws
/// PrecisionExhausted when a return time or image disagrees.
CircleRenormalization circle_renormalization(const PLCircleMap& f, const BigReal& x0, std::size_t n,
                                             std::size_t samples = 64,
                                             std::uint64_t max_iterations = 10'000'000);
/// Lifted image of x under a return branch.
BigReal evaluate(const ReturnBranchPL& b, const BigReal& x);

/// R_t ∘ g with t chosen by bisection so that ρ lies strictly between the
/// last two convergents of `prefix`, certified by the signs of F^q(0) - p.
/// Every map in the family has the breaks of g.
PLCircleMap tune_rotation_prefix(const PLCircleMap& g, const std::vector<BigInt>& prefix);

/// Two breaks (0 and 1/2, slopes 2/3 and 4/3) whose rotation number shares
/// the golden expansion [1, 1, ...] for `depth` quotients.
PLCircleMap golden_two_break_map(BigReal::Precision bits, std::size_t depth = 20);

void write_partition_csv(std::ostream& os, const DynamicalPartition& part);

}  // namespace rauzy
