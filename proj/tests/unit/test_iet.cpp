#include <gtest/gtest.h>

#include "rauzy/error.hpp"
#include "rauzy/iet.hpp"
#include "rauzy/random.hpp"
#include "rauzy/renorm.hpp"

using namespace rauzy;

namespace {
Rational q(long p, long r) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}
}  // namespace

TEST(BuildIet, PrefixSums) {
  const IET t = build_iet({q(1, 3), q(2, 3)}, Perm::parse("AB/BA"));
  EXPECT_EQ(t.domain(0), (Interval{q(0, 1), q(1, 3)}));
  EXPECT_EQ(t.domain(1), (Interval{q(1, 3), q(1, 1)}));
}

TEST(BuildIet, NormalizesAndRejects) {
  const IET t = build_iet({Rational(2), Rational(4)}, Perm::parse("AB/BA"));
  EXPECT_EQ(t.lambda(), (RatVec{q(1, 3), q(2, 3)}));
  EXPECT_THROW(build_iet({Rational(0), Rational(1)}, Perm::parse("AB/BA")), DomainError);
  EXPECT_THROW(build_iet({Rational(1), Rational(1), Rational(1)}, Perm::parse("AB/BA")), DomainError);
}

TEST(Translation, TwoLetters) {
  const IET t = build_iet({q(1, 5), q(4, 5)}, Perm::parse("AB/BA"));
  EXPECT_EQ(translation_vector(t), (RatVec{q(4, 5), q(-1, 5)}));
  EXPECT_EQ(translation_vector_omega(t), translation_vector(t));
}

TEST(Translation, BothRoutesAgree) {
  const IET t = build_iet({q(1, 4), q(1, 4), q(1, 4), q(1, 4)}, Perm::parse("ABCD/BCDA"));
  EXPECT_EQ(translation_vector(t), translation_vector_omega(t));
  EXPECT_EQ(translation_vector(t), t.translation());
  auto rng = make_stream(11, 0);
  for (const char* s : {"ABCDE/EDCBA", "ABCDEF/FCBEDA", "ABC/CBA"}) {
    const Perm p = Perm::parse(s);
    const IET r = build_iet(random_simplex_point(rng, p.d(), 40), p);
    EXPECT_EQ(translation_vector(r), translation_vector_omega(r)) << s;
  }
}

TEST(Evaluate, RotationAndBijection) {
  const IET t = build_iet({q(1, 3), q(2, 3)}, Perm::parse("AB/BA"));
  EXPECT_EQ(evaluate(t, Rational(0)), q(2, 3));
  const IET u = build_iet({q(1, 7), q(2, 7), q(4, 7)}, Perm::parse("ABC/CBA"));
  for (int k = 0; k < 70; ++k) {
    const Rational x = q(k, 70);
    EXPECT_EQ(evaluate_inverse(u, evaluate(u, x)), x);
  }
  EXPECT_THROW(evaluate(t, Rational(1)), DomainError);
  EXPECT_THROW(evaluate(t, q(-1, 2)), DomainError);
}

TEST(Evaluate, ImagesTileInBottomOrder) {
  const IET t = build_iet({q(1, 10), q(2, 10), q(3, 10), q(4, 10)}, Perm::parse("ABCD/DBCA"));
  Rational acc = 0;
  for (Letter a : t.perm().bottom()) {
    const Interval img = t.image(a);
    EXPECT_EQ(img.left, acc);
    EXPECT_EQ(evaluate(t, t.domain(a).left), img.left);
    acc = img.right;
  }
  EXPECT_EQ(acc, 1);
}

TEST(Keane, RationalRotationFails) {
  const IET t = build_iet({q(2, 5), q(3, 5)}, Perm::parse("AB/BA"));
  auto w = keane_check(t, 10);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->steps, 5u);  // period of rotation by 3/5
  EXPECT_FALSE(keane_check(t, 0).has_value());
}

TEST(Keane, GenericRationalPassesShortDepth) {
  // large denominators postpone connections well past the tested depth
  auto rng = make_stream(3, 0);
  const IET t = build_iet(random_simplex_point(rng, 4, 128), Perm::parse("ABCD/DCBA"));
  EXPECT_FALSE(keane_check(t, 200).has_value());
}

TEST(FirstReturn, WholeIntervalIsTheMapItself) {
  const IET t = build_iet({q(1, 10), q(2, 10), q(3, 10), q(4, 10)}, Perm::parse("ABCD/DCBA"));
  const auto br = first_return_map(t, {Rational(0), Rational(1)});
  ASSERT_EQ(br.size(), 4u);
  for (const auto& b : br) EXPECT_EQ(b.time, 1u);
}

TEST(FirstReturn, MatchesOneInductionStepAndKac) {
  const Rational g(987, 1597);  // Fibonacci ratio near the golden mean
  const IET t = build_iet({Rational(1) - g, g}, Perm::parse("AB/BA"));
  const auto [next, step] = rv_step(t);
  const Rational cut = 1 - t.lambda()[step.loser];
  const auto br = first_return_map(t, {Rational(0), cut});
  ASSERT_EQ(br.size(), 2u);
  Rational kac = 0;
  for (const auto& b : br) {
    kac += b.domain.length() * Rational(static_cast<unsigned long>(b.time));
    // rescaled branch lengths are the induced lengths
  }
  EXPECT_EQ(kac, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    const Letter a = next.perm().top()[i];
    EXPECT_EQ(br[i].domain.length() / cut, next.lambda()[a]);
    EXPECT_EQ(br[i].translation / cut, next.translation()[a]);
  }
}

TEST(FirstReturn, GuardTrips) {
  const IET t = build_iet({q(1, 1000), q(999, 1000)}, Perm::parse("AB/BA"));
  EXPECT_THROW(first_return_map(t, {Rational(0), q(1, 1000)}, 10), ResourceGuard);
}
