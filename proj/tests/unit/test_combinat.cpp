#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "rauzy/combinat.hpp"
#include "rauzy/error.hpp"

using namespace rauzy;

namespace {
std::vector<std::size_t> one_based(const std::vector<std::size_t>& m) {
  std::vector<std::size_t> out;
  for (auto x : m) out.push_back(x + 1);
  return out;
}
}  // namespace

TEST(Monodromy, CyclicShiftForFourLetters) {
  // m(1) = 4, m(k) = k - 1
  EXPECT_EQ(one_based(monodromy(Perm::parse("ABCD/BCDA"))), (std::vector<std::size_t>{4, 1, 2, 3}));
}

TEST(Monodromy, TranspositionAndIdentity) {
  EXPECT_EQ(one_based(monodromy(Perm::parse("AB/BA"))), (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(one_based(monodromy(Perm::parse("ABC/ABC"))), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(RotationType, ShiftValues) {
  const Perm p = Perm::parse("ABCD/BCDA");
  ASSERT_TRUE(is_rotation_type(p));
  EXPECT_EQ(*rotation_shift(p), 2u);
  EXPECT_TRUE(is_rotation_type(Perm::parse("ACBD/CBDA")));
}

TEST(RotationType, ThreeLettersMatchesCongruenceOracle) {
  const Perm p = Perm::parse("ABC/CAB");
  const bool expected = oracle::rotation_by_congruence({"A", "B", "C"}, {"C", "A", "B"});
  EXPECT_TRUE(expected);  // m = (2,3,1): shift k = 0
  EXPECT_EQ(is_rotation_type(p), expected);
  EXPECT_EQ(*rotation_shift(p), 0u);
  // exhaustive agreement over all 3- and 4-letter datums with identity top row
  for (std::string bottom : {"ABC", "ACB", "BAC", "BCA", "CAB", "CBA"}) {
    Perm q = Perm::parse("ABC/" + bottom);
    std::vector<std::string> b;
    for (char c : bottom) b.emplace_back(1, c);
    EXPECT_EQ(is_rotation_type(q), oracle::rotation_by_congruence({"A", "B", "C"}, b)) << bottom;
  }
}

TEST(Irreducible, Examples) {
  EXPECT_TRUE(is_irreducible(Perm::parse("AB/BA")));
  EXPECT_FALSE(is_irreducible(Perm::parse("AB/AB")));
  EXPECT_FALSE(is_irreducible(Perm::parse("ABCD/BADC")));
  EXPECT_TRUE(is_irreducible(Perm::parse("ABCD/DCBA")));
}

TEST(Omega, TwoLetters) {
  const IntMatrix om = omega_matrix(Perm::parse("AB/BA"));
  EXPECT_EQ(om, IntMatrix(2, {0, 1, -1, 0}));
}

TEST(Omega, AntisymmetricWithUnitEntries) {
  for (const char* s : {"ABCD/BCDA", "ACBD/CBDA", "ABCDE/EDCBA", "ABCDEF/CFBEAD"}) {
    const IntMatrix om = omega_matrix(Perm::parse(s));
    for (std::size_t i = 0; i < om.size(); ++i)
      for (std::size_t j = 0; j < om.size(); ++j) {
        EXPECT_EQ(om(i, j), -om(j, i));
        EXPECT_LE(abs(om(i, j)), 1);
      }
  }
}

TEST(Kernel, CanonicalFourLetterBasis) {
  const Perm p = Perm::parse("ABCD/BCDA");
  const auto basis = kernel_basis(p);
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_EQ(basis[0], (IntVec{0, 1, 0, -1}));
  EXPECT_EQ(basis[1], (IntVec{0, 0, 1, -1}));
  const IntMatrix om = omega_matrix(p);
  for (const auto& v : basis) EXPECT_EQ(om.apply(v), (IntVec(4, 0)));
}

TEST(Kernel, DimensionIsDMinusTwoForRotations) {
  EXPECT_TRUE(kernel_basis(Perm::parse("AB/BA")).empty());
  for (std::size_t d = 2; d <= 7; ++d) {
    for (const Perm& p : rotation_type_perms(d)) {
      EXPECT_EQ(kernel_basis(p).size(), d - 2) << p.key();
      const IntMatrix om = omega_matrix(p);
      for (const auto& v : kernel_basis(p)) EXPECT_EQ(om.apply(v), IntVec(d, 0));
    }
  }
}

TEST(Successor, TwoLettersIsFixed) {
  const Perm p = Perm::parse("AB/BA");
  EXPECT_EQ(successor(p, MoveType::top), p);
  EXPECT_EQ(successor(p, MoveType::bottom), p);
}

TEST(Successor, TopMoveKeepsTopRow) {
  const Perm p = Perm::parse("ABCD/DCBA");
  const Perm q = successor(p, MoveType::top);
  EXPECT_EQ(q.top(), p.top());
  EXPECT_EQ(q.key(), "A B C D / D A C B");
  const Perm r = successor(p, MoveType::bottom);
  EXPECT_EQ(r.bottom(), p.bottom());
  EXPECT_EQ(r.key(), "A D B C / D C B A");
}

TEST(Successor, CanonicalRotationHasBottomPredecessor) {
  const Perm star = canonical_rotation_perm(3);
  const Perm pred = canonical_bottom_predecessor(star);
  EXPECT_EQ(pred.key(), "A C B / B C A");
  EXPECT_EQ(successor(pred, MoveType::bottom), star);
  const Perm star4 = canonical_rotation_perm(4);
  EXPECT_EQ(successor(canonical_bottom_predecessor(star4), MoveType::bottom), star4);
  const auto letters = rotation_letters(star4);
  EXPECT_EQ(star4.symbol(letters.last_bottom), "A");
  EXPECT_EQ(star4.symbol(letters.last_top), "D");
  EXPECT_EQ(star4.symbol(letters.pred_last_top), "B");
}

TEST(Successor, IrreducibilityPreservedAndPredecessorInverts) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const RauzyClass cls = rauzy_class(canonical_rotation_perm(d));
    for (const Perm& p : cls.perms) {
      for (MoveType t : {MoveType::top, MoveType::bottom}) {
        const Perm q = successor(p, t);
        EXPECT_TRUE(is_irreducible(q));
        auto back = predecessor(q, t);
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(*back, p);
      }
    }
  }
}

TEST(Canonical, Shapes) {
  EXPECT_EQ(canonical_rotation_perm(4).key(), "A B C D / B C D A");
  EXPECT_EQ(canonical_rotation_perm(2).key(), "A B / B A");
  for (std::size_t d = 2; d <= 10; ++d) EXPECT_TRUE(is_rotation_type(canonical_rotation_perm(d)));
  EXPECT_THROW(canonical_rotation_perm(1), DomainError);
}

TEST(RauzyClass, TwoLettersSingleton) {
  const RauzyClass cls = rauzy_class(Perm::parse("AB/BA"));
  EXPECT_EQ(cls.perms.size(), 1u);
  EXPECT_EQ(cls.arcs.size(), 2u);
}

TEST(RauzyClass, StronglyConnectedAndMatchesIndependentBfs) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const Perm star = canonical_rotation_perm(d);
    const RauzyClass cls = rauzy_class(star);
    EXPECT_EQ(oracle::strong_component_count(cls), 1u) << d;
    const auto keys = oracle::rebfs_class(star.top_symbols(), star.bottom_symbols());
    EXPECT_EQ(keys.size(), cls.perms.size());
    for (const auto& p : cls.perms) EXPECT_TRUE(keys.count(p.key())) << p.key();
  }
}

TEST(RauzyClass, RotationPermsShareOneClass) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const RauzyClass cls = rauzy_class(canonical_rotation_perm(d));
    for (const Perm& p : rotation_type_perms(d)) EXPECT_TRUE(cls.contains_up_to_relabeling(p)) << p.key();
  }
  // both four-letter representatives
  const RauzyClass c4 = rauzy_class(canonical_rotation_perm(4));
  EXPECT_TRUE(c4.contains(Perm::parse("ABCD/BCDA")));
  EXPECT_TRUE(c4.contains_up_to_relabeling(Perm::parse("ACBD/CBDA")));
}

TEST(RauzyClass, SizeGuard) {
  EXPECT_THROW(rauzy_class(canonical_rotation_perm(6), 3), ResourceGuard);
  EXPECT_THROW(rauzy_class(Perm::parse("AB/AB")), DomainError);
}

TEST(Perm, RejectsMalformedRows) {
  EXPECT_THROW(Perm::parse("AB/AC"), DomainError);
  EXPECT_THROW(Perm::parse("A/A"), DomainError);
  EXPECT_THROW(Perm::parse("ABC"), DomainError);
  EXPECT_THROW(Perm::from_rows({"A", "A"}, {"A", "A"}), DomainError);
}
