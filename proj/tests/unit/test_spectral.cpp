#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles/oracles.hpp"
#include "rauzy/bigreal.hpp"
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

const std::vector<std::string> kAbcd{"A", "B", "C", "D"};

// the two d = 4 rotation representatives, letters indexed A, B, C, D
Perm shift_perm() { return Perm::from_rows({"A", "B", "C", "D"}, {"B", "C", "D", "A"}, kAbcd); }
Perm swapped_perm() { return Perm::from_rows({"A", "C", "B", "D"}, {"C", "B", "D", "A"}, kAbcd); }

RatVec random_rat_vec(std::mt19937_64& rng, std::size_t d) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 17);
  RatVec v(d);
  for (auto& x : v) x = q(num(rng), den(rng));
  return v;
}
}  // namespace

TEST(ProjectKernel, FixesKernelVectors) {
  for (std::size_t d = 3; d <= 6; ++d) {
    const Perm p = canonical_rotation_perm(d);
    for (const auto& v : kernel_basis(p)) {
      const RatVec w = to_rational(v);
      EXPECT_EQ(project_kernel(w, p), w);
    }
  }
  const Perm p = Perm::parse("ABCDE/EDCBA");
  for (const auto& v : kernel_basis(p)) EXPECT_EQ(project_kernel(to_rational(v), p), to_rational(v));
}

TEST(ProjectKernel, KillsOrthogonalVectors) {
  for (std::size_t d = 3; d <= 6; ++d) {
    const Perm p = canonical_rotation_perm(d);
    for (const auto& w : kernel_complement(p).basis) {
      EXPECT_EQ(project_kernel(w, p), RatVec(d, Rational(0)));
    }
  }
}

TEST(ProjectKernel, TwoLettersGivesZero) {
  EXPECT_EQ(project_kernel({q(3, 2), q(-1, 7)}, Perm::parse("AB/BA")), RatVec(2, Rational(0)));
}

TEST(ProjectKernel, FourLetterUnitVectorAgainstLeastSquares) {
  const std::vector<long> omega{1, 0, 0, 0};
  const RatVec w{1, 0, 0, 0};
  for (const Perm& p : {shift_perm(), swapped_perm()}) {
    const RatVec exact = project_kernel(w, p);
    const auto ref = oracle::least_squares_kernel_projection(p.top_symbols(), p.bottom_symbols(), omega);
    ASSERT_EQ(ref.size(), 4u);
    for (std::size_t a = 0; a < 4; ++a) {
      const BigReal diff = BigReal(exact[a], 400) - BigReal::parse(ref[a], 400);
      EXPECT_LT(abs(diff).to_double(), 1e-80) << p.key() << " letter " << a;
    }
  }
  // frozen values
  EXPECT_EQ(project_kernel(w, shift_perm()), RatVec(4, Rational(0)));
  EXPECT_EQ(project_kernel(w, swapped_perm()), RatVec(4, Rational(0)));
  const RatVec v{0, 1, 0, 0};
  const auto ref = oracle::least_squares_kernel_projection(kAbcd, {"B", "C", "D", "A"}, {0, 1, 0, 0});
  const RatVec exact = project_kernel(v, shift_perm());
  for (std::size_t a = 0; a < 4; ++a)
    EXPECT_LT(abs(BigReal(exact[a], 400) - BigReal::parse(ref[a], 400)).to_double(), 1e-80);
  EXPECT_EQ(exact, (RatVec{0, q(2, 3), q(-1, 3), q(-1, 3)}));
}

TEST(ProjectKernel, IdempotentAndSelfAdjoint) {
  std::mt19937_64 rng(11);
  for (std::size_t d = 3; d <= 6; ++d) {
    const Perm p = canonical_rotation_perm(d);
    for (int i = 0; i < 10; ++i) {
      const RatVec u = random_rat_vec(rng, d), v = random_rat_vec(rng, d);
      const RatVec pu = project_kernel(u, p);
      EXPECT_EQ(project_kernel(pu, p), pu);
      EXPECT_EQ(dot(pu, v), dot(u, project_kernel(v, p)));
    }
  }
}

TEST(ProjectKernel, RejectsBadInput) {
  EXPECT_THROW(project_kernel({1, 2}, Perm::parse("ABC/CBA")), DomainError);
  EXPECT_THROW(project_kernel({1, 2, 3}, Perm::parse("ABC/ACB")), DomainError);
}

// B^T keeps Ker^⊥ and fixes Ker pointwise, so the projection of B^T ω never
// moves. B^{-1} keeps Ker instead, and a generic ω picks up a kernel part.
TEST(KernelInvariance, RandomVectorsFourLetterRotationClass) {
  std::mt19937_64 rng(21);
  auto stream = make_stream(21, 0);
  std::size_t returns = 0, lengths_failures = 0;
  for (int i = 0; i < 6; ++i) {
    const IET t = build_iet(random_simplex_point(stream, 4, 256), shift_perm());
    const auto rep = kernel_projection_invariance_check(t, random_rat_vec(rng, 4), 30);
    EXPECT_EQ(rep.blocks, 30u);
    EXPECT_TRUE(rep.slopes_route_pass());
    for (const auto& r : rep.returns) lengths_failures += !r.lengths_route;
    returns += rep.returns.size();
  }
  EXPECT_GT(returns, 0u);
  EXPECT_GT(lengths_failures, 0u);
}

TEST(KernelInvariance, LengthsRouteHoldsOnKernelPlusImage) {
  // ω in Ker exactly: both routes agree
  auto stream = make_stream(24, 0);
  const IET t = build_iet(random_simplex_point(stream, 4, 256), shift_perm());
  for (const auto& k : kernel_basis(t.perm())) {
    const auto rep = kernel_projection_invariance_check(t, to_rational(k), 30);
    EXPECT_TRUE(rep.lengths_route_pass());
    EXPECT_TRUE(rep.slopes_route_pass());
  }
}

TEST(KernelInvariance, KernelVectorsAtEveryReturn) {
  auto stream = make_stream(22, 0);
  const Perm p = Perm::parse("ABCDE/EDCBA");
  const IET t = build_iet(random_simplex_point(stream, 5, 256), p);
  for (const auto& v : kernel_basis(p)) {
    const auto rep = kernel_projection_invariance_check(t, to_rational(v), 30);
    EXPECT_TRUE(rep.all_pass());
    EXPECT_FALSE(rep.returns.empty());
  }
}

TEST(KernelInvariance, TwoLettersVacuous) {
  auto stream = make_stream(23, 0);
  const IET t = build_iet(random_simplex_point(stream, 2, 128), Perm::parse("AB/BA"));
  EXPECT_TRUE(kernel_projection_invariance_check(t, {q(1, 3), q(2, 5)}, 20).all_pass());
}

TEST(StableSpaces, TwoLetters) {
  const IET t = build_iet({q(1, 3), q(2, 3)}, Perm::parse("AB/BA"));
  const auto s = rotation_stable_spaces(t);
  EXPECT_EQ(s.stable.dim(), 1u);
  EXPECT_EQ(s.central_stable.dim(), 1u);
  EXPECT_TRUE(s.stable.contains({2, -1}));
  EXPECT_TRUE(s.central_stable.contains({2, -1}));
}

TEST(StableSpaces, DimensionsAndNesting) {
  auto stream = make_stream(31, 0);
  for (std::size_t d = 3; d <= 6; ++d) {
    const IET t = build_iet(random_simplex_point(stream, d, 64), canonical_rotation_perm(d));
    const auto s = rotation_stable_spaces(t);
    EXPECT_EQ(s.stable.dim(), 1u);
    EXPECT_EQ(s.central_stable.dim(), d - 1);
    for (const auto& v : s.stable.basis) EXPECT_TRUE(s.central_stable.contains(v));
    // the kernel meets E_s only in 0
    for (const auto& k : kernel_basis(t.perm())) EXPECT_FALSE(s.stable.contains(to_rational(k)));
  }
  const IET t4 = build_iet({q(1, 4), q(1, 4), q(1, 4), q(1, 4)}, swapped_perm());
  EXPECT_EQ(rotation_stable_spaces(t4).stable.dim(), 1u);
  EXPECT_EQ(rotation_stable_spaces(t4).central_stable.dim(), 3u);
}

TEST(StableSpaces, RejectsNonRotation) {
  EXPECT_THROW(rotation_stable_spaces(build_iet({q(1, 3), q(1, 3), q(1, 3)}, Perm::parse("ABC/CBA"))),
               DomainError);
}

TEST(KernelComplement, CanonicalRotationClosedForm) {
  for (std::size_t d = 3; d <= 8; ++d) {
    const Perm p = canonical_rotation_perm(d);
    const Letter beta = p.last_bottom();
    RatVec e(d, Rational(0)), rest(d, Rational(1));
    e[beta] = 1;
    rest[beta] = 0;
    const Subspace c = kernel_complement(p);
    EXPECT_EQ(c.dim(), 2u);
    EXPECT_TRUE(c.contains(e));
    EXPECT_TRUE(c.contains(rest));
  }
}

TEST(Membership, ZeroLambdaAndKernelDirection) {
  auto stream = make_stream(41, 0);
  const IET t = build_iet(random_simplex_point(stream, 4, 64), shift_perm());
  EXPECT_EQ(log_slope_membership(RatVec(4, Rational(0)), t), SlopeClass::in_stable);
  EXPECT_EQ(log_slope_membership(t.lambda(), t), SlopeClass::outside_central);
  // (0,1,0,-1) pushed into λ^⊥ along e_β*, which lies in Ker^⊥
  const RatVec k{0, 1, 0, -1};
  const Letter beta = t.perm().last_bottom();
  RatVec w = k;
  w[beta] -= dot(k, t.lambda()) / t.lambda()[beta];
  EXPECT_EQ(dot(w, t.lambda()), 0);
  ASSERT_NE(project_kernel(w, t.perm()), RatVec(4, Rational(0)));
  EXPECT_EQ(log_slope_membership(w, t), SlopeClass::in_central_not_stable);
  for (const auto& v : rotation_stable_spaces(t).stable.basis)
    EXPECT_EQ(log_slope_membership(v, t), SlopeClass::in_stable);
}

TEST(Lyapunov, ZeroBlocks) {
  const auto est = lyapunov_top(2, Perm::parse("AB/BA"), 0, 5, 1);
  EXPECT_EQ(est.theta_top, 0.0);
  EXPECT_EQ(est.normalization, LyapunovClock::per_zorich_block);
}

TEST(Lyapunov, SeedReproducible) {
  const Perm p = canonical_rotation_perm(3);
  LyapunovOptions o;
  o.bits = 512;
  const auto a = lyapunov_top(3, p, 30, 8, 99, o);
  o.jobs = 3;
  const auto b = lyapunov_top(3, p, 30, 8, 99, o);
  EXPECT_EQ(a.per_sample_rv, b.per_sample_rv);
  EXPECT_EQ(a.theta_top, b.theta_top);
  EXPECT_EQ(a.theta_per_block, b.theta_per_block);
}

TEST(Lyapunov, TwoLettersMatchesLevyConstant) {
  const double levy = oracle::levy_simulation(5, 20000, 400);
  EXPECT_NEAR(levy, std::numbers::pi * std::numbers::pi / (12 * std::log(2.0)), 0.02);
  LyapunovOptions o;
  o.bits = 1024;
  const auto est = lyapunov_top(2, Perm::parse("AB/BA"), 120, 80, 7, o);
  EXPECT_EQ(est.samples + est.skipped, 80u);
  EXPECT_NEAR(est.theta_top / levy, 1.0, 0.05);
  // single subtractions grow like n log n, so that clock drifts to 0
  EXPECT_LT(est.theta_per_rv_step, 0.5 * levy);
}

TEST(Lyapunov, RejectsBadInput) {
  EXPECT_THROW(lyapunov_top(3, Perm::parse("AB/BA"), 5, 1, 1), DomainError);
  EXPECT_THROW(lyapunov_top(2, Perm::parse("AB/BA"), 5, 0, 1), DomainError);
}

TEST(Lyapunov, CsvHasOneRowPerSample) {
  LyapunovOptions o;
  o.bits = 256;
  const auto est = lyapunov_top(2, Perm::parse("AB/BA"), 10, 4, 3, o);
  std::ostringstream os;
  write_lyapunov_csv(os, est);
  std::size_t lines = 0;
  for (char c : os.str()) lines += c == '\n';
  EXPECT_EQ(lines, est.samples + 1);
}
