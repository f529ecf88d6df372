#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles/oracles.hpp"
#include "rauzy/circle.hpp"
#include "rauzy/error.hpp"

using namespace rauzy;

namespace {
constexpr BigReal::Precision kBits = 512;

BigReal golden(BigReal::Precision bits) { return (sqrt(BigReal(5, bits)) - BigReal(1, bits)) / BigReal(2, bits); }

BigReal r(const char* s) { return BigReal::parse(s, kBits); }

// breaks 0, 1/3; slopes 3/2 and 3/4
PLCircleMap two_piece(const BigReal& shift) { return PLCircleMap({r("0"), r("1/3")}, {r("3/2"), r("3/4")}, shift, kBits); }

BigReal aiet_eval(const AIET& t, const BigReal& x) {
  const Letter a = t.letter_at(x);
  return t.image(a).left + t.slopes()[a] * (x - t.domain(a).left);
}
}  // namespace

TEST(PLCircleMap, RejectsBadInput) {
  EXPECT_THROW(PLCircleMap({r("0.1")}, {r("1")}, r("0"), kBits), DomainError);
  EXPECT_THROW(PLCircleMap({r("0"), r("0.5")}, {r("1"), r("2")}, r("0"), kBits), DomainError);
  EXPECT_THROW(PLCircleMap({r("0"), r("0.5")}, {r("2"), r("0")}, r("0"), kBits), DomainError);
}

TEST(PLCircleMap, LiftPreimageAndDegree) {
  const PLCircleMap f = two_piece(r("0.3"));
  EXPECT_LT(abs(f.lift(r("1.25")) - f.lift(r("0.25")) - r("1")), BigReal::pow2(-480, kBits));
  EXPECT_EQ(f(r("0")), r("0.3"));
  // 0.5 is on the second piece: 0.3 + 0.5 + (1/6)(3/4)
  EXPECT_LT(abs(f(r("0.5")) - frac(r("0.3") + r("0.5") + r("1/8"))), BigReal::pow2(-480, kBits));
  for (const char* x : {"0", "0.1", "1/3", "0.6", "0.99"}) {
    EXPECT_LT(abs(f.preimage(f(r(x))) - r(x)), BigReal::pow2(-480, kBits)) << x;
  }
}

TEST(PLCircleMap, ComposeAndInverse) {
  const PLCircleMap f = two_piece(r("0.3"));
  const PLCircleMap id = compose(f, inverse(f));
  EXPECT_EQ(id.pieces(), 1u);
  EXPECT_LT(abs(id.slopes()[0] - r("1")), BigReal::pow2(-480, kBits));
  const PLCircleMap ff = compose(f, f);
  for (const char* x : {"0.05", "0.4", "0.77"}) {
    EXPECT_LT(abs(ff(r(x)) - f(f(r(x)))), BigReal::pow2(-480, kBits)) << x;
  }
}

TEST(PlToAiet, RotationIsTwoIntervalExchange) {
  const BigReal a = golden(kBits);
  const AIET t = pl_to_aiet(PLCircleMap::rotation(a, kBits));
  EXPECT_EQ(t.perm().key(), "A B / B A");
  EXPECT_LT(abs(t.lengths()[0] - (r("1") - a)), BigReal::pow2(-480, kBits));
  EXPECT_LT(abs(t.lengths()[1] - a), BigReal::pow2(-480, kBits));
  EXPECT_TRUE(t.log_slope()[0].is_zero());
  EXPECT_TRUE(t.log_slope()[1].is_zero());
}

TEST(PlToAiet, TwoPieceMapGivesThreeIntervals) {
  const PLCircleMap f = two_piece(r("0.3"));
  const AIET t = pl_to_aiet(f);
  EXPECT_EQ(t.d(), 3u);
  for (int i = 1; i < 40; ++i) {
    const BigReal x = BigReal(i, kBits) / BigReal(40, kBits);
    EXPECT_LT(abs(aiet_eval(t, x) - f(x)), BigReal::pow2(-480, kBits)) << i;
  }
}

TEST(PlToAiet, FixedZeroIsRejected) {
  EXPECT_THROW(pl_to_aiet(two_piece(r("0"))), DomainError);
}

TEST(MeanNonlinearity, PiecewiseLinearIsZero) { EXPECT_EQ(mean_nonlinearity(two_piece(r("0.3"))), 0.0); }

TEST(MeanNonlinearity, SmoothBranchMatchesLogDerivativeJump) {
  // f(x) = x + 0.1 sin(2πx)/(2π) on [0, 1/2]
  const double c = 0.1;
  C2Branch b;
  b.left = 0;
  b.right = 0.5;
  b.d1 = [&](double x) { return 1 + c * std::cos(2 * M_PI * x); };
  b.d2 = [&](double x) { return -2 * M_PI * c * std::sin(2 * M_PI * x); };
  const double expect = std::log(b.d1(0.5)) - std::log(b.d1(0));
  EXPECT_NEAR(mean_nonlinearity(PiecewiseC2Map{b}), expect, 1e-12);
  // the full circle closes up
  C2Branch full = b;
  full.right = 1;
  EXPECT_NEAR(mean_nonlinearity(PiecewiseC2Map{full}), 0.0, 1e-12);
}

TEST(MeanNonlinearity, RejectsNonIncreasingBranch) {
  C2Branch b{0, 1, [](double x) { return x - 0.5; }, [](double) { return 1.0; }};
  EXPECT_THROW(mean_nonlinearity(PiecewiseC2Map{b}), DomainError);
}

TEST(RotationNumber, RigidRotation) {
  const BigReal a = golden(kBits);
  const auto rn = rotation_number(PLCircleMap::rotation(a, kBits), 1000);
  EXPECT_LE(abs(rn.estimate - a), rn.error_bound);
  EXPECT_EQ(rn.error_bound, BigReal(1, kBits) / BigReal(1000, kBits));
}

TEST(RotationNumber, ConjugateKeepsRotationNumber) {
  const BigReal a = golden(kBits);
  const PLCircleMap h = two_piece(r("0"));
  const PLCircleMap f = conjugate(PLCircleMap::rotation(a, kBits), h);
  EXPECT_GT(f.pieces(), 1u);
  for (std::uint64_t n : {500u, 1000u, 2000u}) {
    const auto rn = rotation_number(f, n);
    EXPECT_LE(abs(rn.estimate - a), rn.error_bound) << n;
  }
  EXPECT_EQ(rotation_number(f, 2000).error_bound * BigReal(2, kBits), rotation_number(f, 1000).error_bound);
}

TEST(ContinuedFraction, RationalMatchesEuclid) {
  const CFExpansion cf = continued_fraction(Rational(7, 10), 10);
  EXPECT_TRUE(cf.terminated);
  EXPECT_EQ(cf.a, oracle::euclid_cf(Rational(7, 10)));
  EXPECT_EQ(cf.a, (std::vector<BigInt>{1, 2, 3}));
  EXPECT_EQ(cf.q_at(3), 10);
  EXPECT_EQ(cf.p_at(3), 7);
  EXPECT_EQ(cf.q, oracle::convergent_denominators(cf.a));
  EXPECT_EQ(cf.q_at(-1), 0);
  EXPECT_EQ(cf.p_at(-1), 1);
}

TEST(ContinuedFraction, GoldenIsAllOnes) {
  const CFExpansion cf = continued_fraction(golden(kBits), 60);
  const auto fib = oracle::fibonacci(62);
  for (std::size_t k = 0; k < 60; ++k) {
    EXPECT_EQ(cf.a[k], 1) << k;
    EXPECT_EQ(cf.q[k + 1], fib[k + 1]) << k;
  }
}

TEST(ContinuedFraction, ExhaustedPrecisionThrows) {
  // at 64 bits the golden expansion stays determined for roughly 45 steps
  const BigReal g = golden(64);
  const CFExpansion trusted = trusted_continued_fraction(g, 200);
  EXPECT_GT(trusted.size(), 20u);
  EXPECT_LT(trusted.size(), 64u);
  for (const auto& a : trusted.a) EXPECT_EQ(a, 1);
  EXPECT_THROW(continued_fraction(g, 200), PrecisionExhausted);
  EXPECT_NO_THROW(continued_fraction(g, trusted.size()));
}

TEST(RotationContinuedFraction, RigidAndConjugate) {
  const BigReal a = golden(kBits);
  const CFExpansion rigid = rotation_continued_fraction(PLCircleMap::rotation(a, kBits), 15);
  for (const auto& x : rigid.a) EXPECT_EQ(x, 1);
  const CFExpansion conj = rotation_continued_fraction(conjugate(PLCircleMap::rotation(a, kBits), two_piece(r("0"))), 15);
  EXPECT_EQ(conj.a, rigid.a);
  // sqrt(2) - 1 = [2, 2, ...]
  const BigReal s = sqrt(BigReal(2, kBits)) - BigReal(1, kBits);
  for (const auto& x : rotation_continued_fraction(PLCircleMap::rotation(s, kBits), 10).a) EXPECT_EQ(x, 2);
}

TEST(RotationContinuedFraction, RationalRotationAndBudget) {
  EXPECT_THROW(rotation_continued_fraction(PLCircleMap::rotation(r("0.7"), kBits), 10), DomainError);
  EXPECT_THROW(rotation_continued_fraction(PLCircleMap::rotation(golden(kBits), kBits), 30, 100), ResourceGuard);
}

TEST(DynamicalPartition, GoldenCountsAndCovering) {
  const auto part = dynamical_partition(PLCircleMap::rotation(golden(kBits), kBits), r("0"), 3);
  // q_3 = 3 long arcs, q_2 = 2 short arcs
  EXPECT_EQ(part.long_arcs.size(), 3u);
  EXPECT_EQ(part.short_arcs.size(), 2u);
  EXPECT_LT(part.covering_error, BigReal::pow2(-400, kBits));
  const BigReal a = golden(kBits);
  for (const auto& arc : part.long_arcs) EXPECT_LT(abs(arc.length - a * a * a), BigReal::pow2(-400, kBits));
  for (const auto& arc : part.short_arcs) EXPECT_LT(abs(arc.length - a * a * a * a), BigReal::pow2(-400, kBits));
  std::ostringstream os;
  write_partition_csv(os, part);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(DynamicalPartition, RefinementHoldsOnRigidAndBrokenMaps) {
  const PLCircleMap rigid = PLCircleMap::rotation(golden(kBits), kBits);
  const PLCircleMap broken = golden_two_break_map(kBits, 20);
  EXPECT_EQ(broken.pieces(), 2u);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (const PLCircleMap* f : {&rigid, &broken}) {
      const auto part = dynamical_partition(*f, r("0"), n);
      EXPECT_EQ(BigInt(part.long_arcs.size()), part.cf.q_at(static_cast<long>(n)));
      EXPECT_EQ(BigInt(part.short_arcs.size()), part.cf.q_at(static_cast<long>(n) - 1));
      const auto rep = check_refinement(*f, r("0"), n);
      EXPECT_TRUE(rep.holds) << n;
      EXPECT_EQ(rep.quotient, 1);
      EXPECT_EQ(BigInt(rep.arcs_checked), part.cf.q_at(static_cast<long>(n)));
    }
  }
}

TEST(GoldenTwoBreakMap, SharesGoldenPrefix) {
  const PLCircleMap f = golden_two_break_map(kBits, 20);
  const CFExpansion cf = rotation_continued_fraction(f, 20);
  for (const auto& a : cf.a) EXPECT_EQ(a, 1);
  EXPECT_THROW(tune_rotation_prefix(two_piece(r("0.3")), {1, 1}), DomainError);
}

TEST(CircleRenormalization, RigidRotationGivesTranslations) {
  const BigReal a = golden(kBits);
  const auto ren = circle_renormalization(PLCircleMap::rotation(a, kBits), r("0"), 5, 32);
  EXPECT_EQ(ren.sampled, 32u);
  EXPECT_EQ(ren.on_short.time, 5u);  // q_4
  EXPECT_EQ(ren.on_long.time, 8u);   // q_5
  for (const auto& s : ren.on_short.slopes) EXPECT_EQ(s, r("1"));
  for (const auto& s : ren.on_long.slopes) EXPECT_EQ(s, r("1"));
}

TEST(CircleRenormalization, SlopesAreOrbitProducts) {
  const PLCircleMap f = golden_two_break_map(kBits, 20);
  const auto ren = circle_renormalization(f, r("0"), 6, 64);
  EXPECT_EQ(ren.sampled, 64u);
  EXPECT_LT(ren.max_sample_error, BigReal::pow2(-400, kBits));
  for (const ReturnBranchPL* br : {&ren.on_short, &ren.on_long}) {
    for (std::size_t k = 0; k < br->cuts.size(); ++k) {
      const BigReal right = k + 1 < br->cuts.size() ? br->cuts[k + 1] : br->domain.right;
      BigReal x = (br->cuts[k] + right) / BigReal(2, kBits);
      BigReal prod(1, kBits);
      for (std::uint64_t t = 0; t < br->time; ++t) {
        prod *= f.slopes()[f.piece_at(frac(x))];
        x = f.lift(x);
      }
      EXPECT_LT(abs(prod - br->slopes[k]), BigReal::pow2(-400, kBits));
    }
  }
}
