#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles/oracles.hpp"
#include "rauzy/aiet.hpp"
#include "rauzy/error.hpp"
#include "rauzy/random.hpp"
#include "rauzy/spectral.hpp"

using namespace rauzy;

namespace {
Rational q(long p, long r) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

RealVec reals(const RatVec& v, BigReal::Precision bits) {
  RealVec out;
  for (const auto& x : v) out.emplace_back(x, bits);
  return out;
}

// ℓ = (0.4, 0.6), slopes 1.25 and 5/6: images 0.5 and 0.5
AIET two_branch(BigReal::Precision bits) {
  return AIET(Perm::parse("AB/BA"), {BigReal::parse("0.4", bits), BigReal::parse("0.6", bits)},
              {log(BigReal::parse("1.25", bits)), log(BigReal::parse("5/6", bits))}, bits);
}

AIET random_aiet(std::mt19937_64& rng, const Perm& p, BigReal::Precision bits) {
  PrecisionGuard g(bits);
  const RatVec lam = random_simplex_point(rng, p.d(), bits);
  std::uniform_real_distribution<double> u(-1, 1);
  RealVec w;
  for (std::size_t a = 0; a < p.d(); ++a) w.emplace_back(u(rng), bits);
  return aiet_with_shifted_slopes(p, reals(lam, bits), w);
}

// affine map over the path of a random IET, so that n_blocks are guaranteed;
// ω is a random vector of λ^⊥
AIET seeded_aiet(std::uint64_t seed, const Perm& p, std::size_t n_blocks, BigReal::Precision bits) {
  auto rng = make_stream(seed, 0);
  const IET t = build_iet(random_simplex_point(rng, p.d(), 1024), p);
  std::uniform_int_distribution<long> u(-65536, 65536);
  RatVec w;
  for (std::size_t a = 0; a < p.d(); ++a) w.push_back(q(u(rng), 65536));
  const Rational c = dot(w, t.lambda()) / dot(t.lambda(), t.lambda());
  for (std::size_t a = 0; a < p.d(); ++a) w[a] -= c * t.lambda()[a];
  return aiet_over_iet(t, n_blocks, w, bits);
}

IET golden_approximant(std::size_t k) {
  const auto f = oracle::fibonacci(k + 2);
  return build_iet({Rational(f[k]), Rational(f[k - 1])}, Perm::parse("AB/BA"));
}

double abs_diff(const BigReal& a, const BigReal& b) { return abs(a - b).to_double(); }
}  // namespace

TEST(Aiet, ValidatesTiling) {
  EXPECT_NO_THROW(two_branch(256));
  EXPECT_THROW(AIET(Perm::parse("AB/BA"), {BigReal::parse("0.4", 256), BigReal::parse("0.6", 256)},
                    {BigReal(0.1, 256), BigReal(0.1, 256)}, 256),
               DomainError);
  EXPECT_THROW(AIET(Perm::parse("AB/BA"), {BigReal::parse("0.5", 256), BigReal::parse("0.6", 256)},
                    {BigReal(0, 256), BigReal(0, 256)}, 256),
               DomainError);
  EXPECT_THROW(AIET(Perm::parse("AB/BA"), {BigReal(-0.5, 256), BigReal(1.5, 256)},
                    {BigReal(0, 256), BigReal(0, 256)}, 256),
               DomainError);
}

TEST(Aiet, BranchesAreIncreasingAndImagesTile) {
  std::mt19937_64 rng(3);
  const AIET f = random_aiet(rng, Perm::parse("ABCD/DCBA"), 256);
  BigReal acc(0, 256);
  for (Letter a : f.perm().bottom()) {
    EXPECT_LT(abs_diff(f.image(a).left, acc), 1e-70);
    acc = f.image(a).right;
  }
  EXPECT_LT(abs_diff(acc, BigReal(1, 256)), 1e-70);
  for (Letter a = 0; a < f.d(); ++a) {
    const RealInterval dom = f.domain(a);
    const BigReal mid = (dom.left + dom.right) / BigReal(2, 256);
    EXPECT_LT(aiet_evaluate(f, dom.left), aiet_evaluate(f, mid));
    EXPECT_LT(abs_diff(aiet_evaluate(f, dom.left), f.image(a).left), 1e-70);
  }
}

TEST(Aiet, ZeroSlopeMatchesIet) {
  auto rng = make_stream(4, 0);
  const IET t = build_iet(random_simplex_point(rng, 5, 128), Perm::parse("ABCDE/EDCBA"));
  const AIET f = aiet_from_iet(t, 256);
  for (int i = 1; i < 40; ++i) {
    const Rational x = q(i, 40);
    EXPECT_LT(abs_diff(aiet_evaluate(f, BigReal(x, 256)), BigReal(evaluate(t, x), 256)), 1e-70);
  }
}

TEST(GietStep, ZeroSlopeEqualsRauzyVeech) {
  auto rng = make_stream(5, 0);
  for (int i = 0; i < 10; ++i) {
    IET t = build_iet(random_simplex_point(rng, 4, 64), canonical_rotation_perm(4));
    AIET f = aiet_from_iet(t, 256);
    for (int s = 0; s < 8; ++s) {
      const auto [nt, step] = rv_step(t);
      const GietStep g = giet_rv_step(f);
      EXPECT_EQ(g.step.type, step.type);
      EXPECT_EQ(g.step.winner, step.winner);
      EXPECT_EQ(g.next.perm(), nt.perm());
      for (Letter a = 0; a < 4; ++a) EXPECT_LT(abs_diff(g.next.lengths()[a], BigReal(nt.lambda()[a], 256)), 1e-60);
      t = nt;
      f = g.next;
    }
  }
}

TEST(GietStep, TopStepSlopeUpdate) {
  // 0.4 vs 0.6 * 5/6 = 0.5 on the images: last top A (0.4)... the last top is B
  const AIET f = two_branch(256);
  const GietStep g = giet_rv_step(f);
  const Letter t = f.perm().last_top(), b = f.perm().last_bottom();
  if (g.step.type == MoveType::top) {
    EXPECT_EQ(g.next.log_slope()[b], f.log_slope()[b] + f.log_slope()[t]);
    EXPECT_EQ(g.next.log_slope()[t], f.log_slope()[t]);
  } else {
    EXPECT_EQ(g.next.log_slope()[t], f.log_slope()[t] + f.log_slope()[b]);
    EXPECT_EQ(g.next.log_slope()[b], f.log_slope()[b]);
  }
  EXPECT_EQ(g.step.type, MoveType::top);  // ℓ_B = 0.6 > e^{ω_A} ℓ_A = 0.5
}

TEST(GietStep, MatchesBruteForceFirstReturn) {
  const BigReal::Precision bits = 256;
  const AIET f = two_branch(bits);
  const GietStep g = giet_rv_step(f);
  const BigReal& j = g.scale;
  for (int i = 0; i < 50; ++i) {
    const BigReal xs = BigReal(2 * i + 1, bits) / BigReal(100, bits);
    BigReal y = aiet_evaluate(f, xs * j);
    int guard = 0;
    while (y >= j && ++guard < 1000) y = aiet_evaluate(f, y);
    ASSERT_LT(guard, 1000);
    const BigReal expect = y / j;
    EXPECT_LT(abs_diff(aiet_evaluate(g.next, xs), expect), std::ldexp(1.0, -200)) << i;
  }
}

TEST(GietStep, TieThrows) {
  // ℓ_B = 0.5 and e^{ω_A} ℓ_A = 0.5 exactly
  const BigReal::Precision bits = 256;
  const AIET f(Perm::parse("AB/BA"), {BigReal::parse("0.5", bits), BigReal::parse("0.5", bits)},
               {BigReal(0, bits), BigReal(0, bits)}, bits);
  EXPECT_THROW(giet_rv_step(f), TieUndecidable);
}

TEST(AietOrbit, FollowsIetPathWhenSlopesVanish) {
  auto rng = make_stream(6, 0);
  const IET t = build_iet(random_simplex_point(rng, 4, 512), canonical_rotation_perm(4));
  const AietOrbit orb = aiet_orbit(aiet_from_iet(t, 768), 20);
  EXPECT_EQ(orb.status, InductionStatus::complete);
  EXPECT_EQ(orb.path, rotation_path(t, 20));
}

TEST(AietOrbit, LowPrecisionStopsWithStatus) {
  auto rng = make_stream(7, 0);
  const IET t = build_iet(random_simplex_point(rng, 3, 512), canonical_rotation_perm(3));
  const AietOrbit orb = aiet_orbit(aiet_from_iet(t, 64), 400);
  EXPECT_LT(orb.blocks(), 400u);
  EXPECT_NE(orb.status, InductionStatus::complete);
}

TEST(SlopeCocycle, ZeroSlopesGiveZeroDeviation) {
  auto rng = make_stream(8, 0);
  const IET t = build_iet(random_simplex_point(rng, 3, 256), canonical_rotation_perm(3));
  const auto rep = log_slope_cocycle_check(aiet_from_iet(t, 256), 10);
  EXPECT_EQ(rep.max_relative_deviation, 0.0);
}

TEST(SlopeCocycle, TrackedSlopesFollowTransposeCocycle) {
  for (int i = 0; i < 4; ++i) {
    const AIET f = seeded_aiet(90 + i, canonical_rotation_perm(3 + i % 2), 40, 256);
    const auto rep = log_slope_cocycle_check(f, 40);
    EXPECT_EQ(rep.blocks, 40u) << to_string(rep.status);
    EXPECT_LE(rep.max_relative_deviation, 1e-20);
  }
}

TEST(SlopeCocycle, DeviationGrowsWhenPrecisionIsHalved) {
  const auto rh = log_slope_cocycle_check(seeded_aiet(100, canonical_rotation_perm(3), 12, 256), 12);
  const auto rl = log_slope_cocycle_check(seeded_aiet(100, canonical_rotation_perm(3), 12, 128), 12);
  EXPECT_GT(rl.max_relative_deviation, rh.max_relative_deviation);
  EXPECT_LE(rh.max_relative_deviation, 1e-20);
}

TEST(AietOverPath, FollowsPrefixAndHasGivenSlopes) {
  auto rng = make_stream(11, 0);
  const IET t = build_iet(random_simplex_point(rng, 3, 512), canonical_rotation_perm(3));
  const auto s = rotation_stable_spaces(t);
  const RatVec omega = s.central_stable.basis.front();
  const AIET f = aiet_over_iet(t, 25, omega, 768);
  for (Letter a = 0; a < 3; ++a) EXPECT_EQ(f.log_slope()[a], BigReal(omega[a], 768));
  const AietOrbit orb = aiet_orbit(f, 25);
  ASSERT_EQ(orb.blocks(), 25u) << to_string(orb.status);
  EXPECT_EQ(orb.path, rotation_path(t, 25));
}

TEST(AietOverPath, PathPrecisionKeepsLongPrefix) {
  // a slope off the stable line shrinks some domains far below 2^-heights
  auto rng = make_stream(11, 1);
  const IET t = build_iet(random_simplex_point(rng, 3, 4096), canonical_rotation_perm(3));
  RatVec omega{q(1, 3), q(-1, 1), q(1, 2)};
  const Rational c = dot(omega, t.lambda()) / dot(t.lambda(), t.lambda());
  for (std::size_t a = 0; a < 3; ++a) omega[a] -= c * t.lambda()[a];
  OrbitOptions oo;
  oo.record_levels = false;
  oo.record_matrices = false;
  const OrbitRecord rec = orbit(t, 120, oo);
  const RotationPath path = rotation_path(rec);
  const auto bits = path_precision(path, omega, rec.lambda(120));
  const AIET f = aiet_over_path(path, omega, rec.lambda(120), bits);
  const AietOrbit orb = aiet_orbit(f, 119);
  ASSERT_EQ(orb.blocks(), 119u) << to_string(orb.status);
  EXPECT_EQ(orb.path, RotationPath(path.begin(), path.begin() + 119));
}

TEST(AietOverPath, RejectsOneSignedTerminalSlope) {
  const IET t = golden_approximant(30);
  EXPECT_THROW(aiet_over_iet(t, 5, {1, 1}, 256), DomainError);
  EXPECT_THROW(aiet_over_path({}, {0, 0}, {1, 1}, 256), DomainError);
}

TEST(MeasureWeights, TowerWeightsSumToOne) {
  auto rng = make_stream(12, 0);
  const IET t = build_iet(random_simplex_point(rng, 4, 1024), canonical_rotation_perm(4));
  const auto w = invariant_measure_weights(rotation_path(t, 200), 200);
  ASSERT_EQ(w.tower_weight.size(), 201u);
  for (const auto& row : w.tower_weight) EXPECT_EQ(sum(row), 1);
  EXPECT_EQ(sum(w.lambda_hat), 1);
  for (std::size_t a = 0; a < 4; ++a)
    EXPECT_NEAR(w.lambda_hat[a].get_d(), t.lambda()[a].get_d(), 2 * w.cone_spread + 1e-15);
}

TEST(MeasureWeights, ShortPathTripsGuard) {
  const IET t = golden_approximant(40);
  EXPECT_THROW(invariant_measure_weights(rotation_path(t, 3), 3), ResourceGuard);
  EXPECT_THROW(invariant_measure_weights(rotation_path(t, 3), 4), DomainError);
}

TEST(MeasureWeights, GoldenTowersMatchIetLengths) {
  // conjugate measure of a golden AIET is Lebesgue for the golden rotation
  const IET t = golden_approximant(70);
  const OrbitRecord rec = orbit(t, 50);
  const RatVec omega{t.lambda()[1], -t.lambda()[0]};
  const AIET f = aiet_over_path(rotation_path(rec), omega, rec.lambda(50), 512);
  const auto w = invariant_measure_weights(f, 40);
  // level n sees 40 - n blocks of contraction
  for (std::size_t n = 0; n <= 15; n += 5) {
    const RatVec len = rec.lengths(n);
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_NEAR(w.base_measure[n][a].get_d() / len[a].get_d(), 1.0, 1e-8) << n;
    }
  }
}

TEST(LocalDimension, ZeroSlopeRatiosAreOne) {
  auto rng = make_stream(13, 0);
  const IET t = build_iet(random_simplex_point(rng, 3, 1024), canonical_rotation_perm(3));
  const auto tr = local_dimension_estimates(aiet_from_iet(t, 1024), 40);
  ASSERT_EQ(tr.levels.size(), 40u);
  for (const auto& lv : tr.levels) EXPECT_NEAR(lv.estimate, 1.0, 1e-6) << lv.n;
  std::ostringstream os;
  write_dimension_csv(os, tr);
  EXPECT_NE(os.str().find("estimate"), std::string::npos);
}

TEST(LocalDimension, StableSlopesStayNearOne) {
  auto rng = make_stream(14, 0);
  const IET t = build_iet(random_simplex_point(rng, 3, 1024), canonical_rotation_perm(3));
  const RatVec omega = rotation_stable_spaces(t).stable.basis.front();
  Rational m = 0;
  for (const auto& x : omega) m = std::max(m, Rational(abs(x)));
  RatVec unit;
  for (const auto& x : omega) unit.push_back(x / m);
  const AIET f = aiet_over_iet(t, 60, unit, 1024);
  const auto tr = local_dimension_estimates(f, 45);
  ASSERT_FALSE(tr.levels.empty());
  for (const auto& lv : tr.levels)
    if (lv.n >= 20) EXPECT_NEAR(lv.estimate, 1.0, 0.1) << lv.n;
}

TEST(FloorDimension, ZeroSlopeIsOne) {
  auto rng = make_stream(15, 0);
  const IET t = build_iet(random_simplex_point(rng, 3, 1024), canonical_rotation_perm(3));
  const auto fd = floor_sampled_dimension(aiet_from_iet(t, 1024), 30, 50, 3);
  EXPECT_EQ(fd.samples, 50u);
  EXPECT_NEAR(fd.median, 1.0, 1e-6);
  const auto again = floor_sampled_dimension(aiet_from_iet(t, 1024), 30, 50, 3);
  EXPECT_EQ(fd.median, again.median);
}
