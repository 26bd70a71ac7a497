#include <gtest/gtest.h>

#include "siegel/io.hpp"

using namespace siegel;

TEST(ParseMatrix, AcceptsEvenSymmetric) {
  auto T = io::parse_matrix("[[2,1],[1,2]]");
  EXPECT_EQ(T.size(), 2);
  EXPECT_EQ(T.b(0, 1), 1);
  EXPECT_EQ(T.det2T(), 3);
}

TEST(ParseMatrix, Rejections) {
  for (std::string bad : {"", "[[2,1],[1,2]", "[]", "[[2,1],[1]]", "[[1,0],[0,2]]", "[[2,1],[0,2]]", "[[2,1.5],[1.5,2]]", "{\"a\":1}",
                          "[[2,\"x\"],[\"x\",2]]"})
    EXPECT_THROW(io::parse_matrix(bad), usage_error) << bad;
}

TEST(ParseEGK, ImpliedLeadingSign) {
  auto H = io::parse_egk("0,0,1,1:-1,-1,1");
  EXPECT_EQ(H, (EGKDatum{{0, 0, 1, 1}, {1, -1, -1, 1}}));
  EXPECT_EQ(io::parse_egk("0,0,1,1:1,-1,-1,1"), H);
  EXPECT_EQ(io::parse_egk("0,1,1:0,-1"), (EGKDatum{{0, 1, 1}, {1, 0, -1}}));
}

TEST(ParseEGK, Rejections) {
  for (std::string bad : {"0,1,1", "0,x,1:1,1", "0,1:1,1,1", "1,0:1", "0,1 2:1,1"}) EXPECT_THROW(io::parse_egk(bad), usage_error) << bad;
}

TEST(Json, CanonicalRationals) {
  EXPECT_EQ(io::rat(Rat(6, 4)), "3/2");
  EXPECT_EQ(io::rat(Rat(-4, 2)), "-2");
  auto j = io::to_json(ExactScalar(Rat(-1536)) * ExactScalar::log_prime(3));
  EXPECT_EQ(j["coeff"], "-1536");
  EXPECT_EQ(j["pi"], 0);
  EXPECT_EQ(j["factors"].size(), 1u);
}

TEST(Json, CoefficientReportIsDeterministic) {
  auto R = C4(HalfIntMat::diag({1, 1, 3, 3}));
  auto a = io::to_json(R).dump(), b = io::to_json(C4(HalfIntMat::diag({1, 1, 3, 3}))).dump();
  EXPECT_EQ(a, b);
  auto j = io::to_json(R);
  EXPECT_TRUE(j.is_object());
  EXPECT_EQ(io::json::parse(j.dump()).dump(), j.dump());
}

TEST(Csv, TripleHeaderAndRows) {
  auto R = triple_intersection(1, 1, 1);
  auto s = io::csv(R);
  EXPECT_EQ(s.substr(0, s.find('\n')), "B2,diff,p,degZ_coeff,status");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), static_cast<long>(R.table.size()) + 1);
  EXPECT_EQ(s, io::csv(triple_intersection(1, 1, 1)));
}

TEST(Csv, FlattenQuotesCommas) {
  io::json j = {{"a", 1}, {"b", {{"c", "x,y"}}}, {"d", {1, 2}}};
  EXPECT_EQ(io::csv(j), "key,value\na,1\nb.c,\"x,y\"\nd,\"[1,2]\"\n");
}
