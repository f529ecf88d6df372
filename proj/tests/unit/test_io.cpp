#include <gtest/gtest.h>

#include "rauzy/error.hpp"
#include "rauzy/io.hpp"

using namespace rauzy;

TEST(Io, PermRoundTrip) {
  const Perm p = Perm::parse("A B C D / D C B A");
  const Json j = to_json(p);
  EXPECT_EQ(j.dump(), R"({"top":["A","B","C","D"],"bottom":["D","C","B","A"]})");
  EXPECT_EQ(perm_from_json(j), p);
  EXPECT_THROW(perm_from_json(parse_json(R"({"top":["A","B"],"bottom":["A","C"]})")), DomainError);
  EXPECT_THROW(perm_from_json(parse_json(R"({"top":["A","B"]})")), DomainError);
  EXPECT_THROW(parse_json("{\"top\": ["), DomainError);
}

TEST(Io, IetIsBitExact) {
  const IET t = iet_from_json(parse_json(R"({"perm":{"top":["A","B"],"bottom":["B","A"]},"lambda":["1/3","4/3"]})"));
  EXPECT_EQ(t.lambda()[0], Rational(1, 5));
  EXPECT_EQ(to_json(t)["lambda"].dump(), R"(["1/5","4/5"])");
  EXPECT_EQ(iet_from_json(to_json(t)).lambda(), t.lambda());
  EXPECT_THROW(iet_from_json(parse_json(R"({"perm":{"top":["A","B"],"bottom":["B","A"]},"lambda":["1/3","x"]})")),
               DomainError);
}

TEST(Io, AietAndPlMapRoundTrip) {
  const Json j = parse_json(R"({"perm":{"top":["A","B"],"bottom":["B","A"]},
    "lengths":["0.4","0.6"],"log_slope":["0","0"],"precision_bits":128})");
  const AIET f = aiet_from_json(j);
  EXPECT_EQ(f.precision(), 128u);
  const AIET g = aiet_from_json(to_json(f));
  EXPECT_EQ(g.lengths()[0], f.lengths()[0]);
  EXPECT_EQ(g.log_slope()[1], f.log_slope()[1]);

  const PLCircleMap m = pl_map_from_json(parse_json(R"({"breaks":["0","0.5"],"slopes":["2/3","4/3"]})"), 192);
  EXPECT_EQ(m.precision(), 192u);
  EXPECT_EQ(m.shift().sign(), 0);
  const PLCircleMap m2 = pl_map_from_json(to_json(m));
  EXPECT_EQ(m2.slopes()[1], m.slopes()[1]);
  EXPECT_THROW(pl_map_from_json(parse_json(R"({"breaks":["0"],"slopes":["2"]})")), DomainError);
}

TEST(Io, ReportsHaveStableFields) {
  const RauzyClass cls = rauzy_class(Perm::parse("AB/BA"));
  const Json c = to_json(cls);
  EXPECT_EQ(c["size"], 1);
  EXPECT_EQ(c["arcs"].size(), 2u);
  const IET t = build_iet({Rational(3, 11), Rational(8, 11)}, Perm::parse("AB/BA"));
  const Json p = to_json(rotation_path(t, 2));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0]["z"], 2);
  const Json cf = to_json(continued_fraction(Rational(7, 10), 10));
  EXPECT_EQ(cf["quotients"].dump(), R"(["1","2","3"])");
  EXPECT_TRUE(cf["terminated"].get<bool>());
}
