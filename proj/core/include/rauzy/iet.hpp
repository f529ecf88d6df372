#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rauzy/combinat.hpp"
#include "rauzy/numeric.hpp"

namespace rauzy {

/// Half-open interval [left, right).
template <class Num>
struct BasicInterval {
  Num left;
  Num right;

  Num length() const { return right - left; }
  bool contains(const Num& x) const { return left <= x && x < right; }
  bool contains(const BasicInterval& o) const { return left <= o.left && o.right <= right; }
  bool overlaps(const BasicInterval& o) const { return left < o.right && o.left < right; }
  friend bool operator==(const BasicInterval& a, const BasicInterval& b) {
    return a.left == b.left && a.right == b.right;
  }
};

using Interval = BasicInterval<Rational>;

/// Interval exchange on [0,1) with exact rational lengths summing to 1.
class IET {
 public:
  IET() = default;
  IET(Perm perm, RatVec lambda);

  const Perm& perm() const noexcept { return perm_; }
  std::size_t d() const noexcept { return perm_.d(); }
  /// Lengths by letter, normalized to sum 1.
  const RatVec& lambda() const noexcept { return lambda_; }

  /// I_a = [l_a, r_a), laid out in top-row order.
  Interval domain(Letter a) const;
  /// T(I_a), laid out in bottom-row order.
  Interval image(Letter a) const;
  /// w_a such that T(x) = x + w_a on I_a.
  const RatVec& translation() const noexcept { return translation_; }

  /// Letter whose domain contains x, by binary search over left endpoints.
  Letter letter_at(const Rational& x) const;

 private:
  Perm perm_;
  RatVec lambda_;
  RatVec left_;
  RatVec image_left_;
  RatVec translation_;
};

/// Validates and normalizes λ (divides by the exact sum).
IET build_iet(const RatVec& lambda, const Perm& perm);

/// w via the explicit double sum over letters placed before each letter.
RatVec translation_vector(const IET& t);
/// w via the intersection matrix: Ω λ.
RatVec translation_vector_omega(const IET& t);

Rational evaluate(const IET& t, const Rational& x);
Rational evaluate_inverse(const IET& t, const Rational& x);

/// A forward orbit of one discontinuity hitting a discontinuity.
struct KeaneWitness {
  Letter from;          ///< orbit starts at the left end of this letter's interval
  std::size_t steps;    ///< T^steps(l_from) = l_hit
  Letter hit;
};

/// Bounded Keane check: nullopt means no connection within `depth` steps.
std::optional<KeaneWitness> keane_check(const IET& t, std::size_t depth);

struct ReturnBranch {
  Interval domain;
  std::uint64_t time;
  Rational translation;  ///< T^time(x) = x + translation on domain
};

/// Brute-force first-return map of T to J. Adjacent branches with equal time
/// and translation are merged. Throws ResourceGuard when some point has not
/// returned after `max_time` iterations.
std::vector<ReturnBranch> first_return_map(const IET& t, const Interval& j,
                                           std::uint64_t max_time = 1'000'000);

}  // namespace rauzy
