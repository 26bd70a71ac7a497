#include <gtest/gtest.h>

#include "siegel/siegelmass.hpp"

using namespace siegel;

TEST(MaximalOrder, StructuralInvariants) {
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 41L, 73L}) {
    auto G = build_maximal_order(p);
    EXPECT_EQ(G.dual_index, Int(p) * p) << p;
    EXPECT_EQ(G.diff, std::vector<long>{p}) << p;
    EXPECT_TRUE(G.gram.positive_definite());
    EXPECT_EQ(G.gram.disc(), Int(p) * p);
    // reduced norms of basis elements are integers: diagonal of the trace form is even
    for (int i = 0; i < 4; ++i) EXPECT_EQ(G.gram.b(i, i) % 2, 0);
  }
  EXPECT_THROW(build_maximal_order(9), usage_error);
  EXPECT_THROW(build_maximal_order(1), usage_error);
}

TEST(Automorphisms, KnownLattices) {
  EXPECT_EQ(automorphism_count(HalfIntMat({{2, 1}, {1, 2}})), 12);
  EXPECT_EQ(automorphism_count(HalfIntMat::diag({1, 1, 1})), 48);
  EXPECT_EQ(automorphism_count(HalfIntMat::diag({1, 1, 1, 1})), 384);
  // the Hurwitz order: D4 root lattice
  EXPECT_EQ(automorphism_count(build_maximal_order(2).gram), 1152);
}

// one class in the genus for p <= 7, so the mass is 1 / |O(L)|
TEST(Mass, AgainstAutomorphismEnumeration) {
  for (long p : {2L, 3L, 5L, 7L}) {
    auto G = build_maximal_order(p);
    EXPECT_EQ(mass_maximal_order(p), 1 / Rat(to_int(automorphism_count(G.gram)))) << p;
  }
  EXPECT_EQ(mass_maximal_order(2), Rat(1, 1152));
  EXPECT_EQ(mass_full(3), Rat(1, 144));
}

TEST(Mass, ClosedFormAcrossPrimes) {
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 41L})
    EXPECT_EQ(mass_maximal_order(p), Rat((p - 1) * (p - 1)) / 1152) << p;
}

TEST(Densities, GammaProducts) {
  for (int lo : {1, 2}) {
    auto g = gamma_product(lo);
    EXPECT_EQ(g.coeff(), 2);
    EXPECT_EQ(g.pi_exp(), 4);
  }
}

TEST(Densities, Ramified) {
  EXPECT_EQ(ramified_density(3, 2), 9);
  EXPECT_EQ(ramified_density(3, 3), Rat(32, 3));
  EXPECT_EQ(ramified_density(4, 3, 2), 192);
  EXPECT_EQ(ramified_density(4, 3, 4), 576);
  EXPECT_THROW(ramified_density(4, 3, 3), usage_error);
  EXPECT_THROW(ramified_density(5, 3), usage_error);
}

TEST(Densities, Archimedean) {
  auto G = build_maximal_order(3);
  auto d = archimedean_density(4, G.gram, G.dual_index);
  // 2 pi^4 / (sqrt(9) * 81)
  EXPECT_EQ(d.coeff(), Rat(2, 243));
  EXPECT_EQ(d.pi_exp(), 4);
  auto d3 = archimedean_density(3, HalfIntMat::diag({1, 1, 1}), G.dual_index);
  EXPECT_EQ(d3.coeff(), Rat(2, 27));
  EXPECT_THROW(archimedean_density(3, HalfIntMat::diag({1, 1, 1}), 3), usage_error);
  EXPECT_THROW(archimedean_density(4, HalfIntMat({{2, 3}, {3, 2}}), 9), usage_error);
}

TEST(LocalF, Methods) {
  auto T = HalfIntMat::diag({1, 1, 3, 3});
  EXPECT_EQ(local_F(T, 5).method, "unimodular");
  auto L3 = local_F(T, 3);
  EXPECT_EQ(L3.method, "egk");
  EXPECT_EQ(L3.datum, "(0,0,1,1;1,-1,-1,1)");
  auto L2 = local_F(T, 2);
  EXPECT_EQ(L2.method, "reduction");
  EXPECT_EQ(L2.value, 8);
}

TEST(RepAverage, MaximalOrderRepresentsItselfTwice) {
  for (long p : {2L, 3L, 5L, 7L, 11L}) EXPECT_EQ(rep_average(build_maximal_order(p).gram, p), 2) << p;
}

TEST(Products, RationalAndGenusChecked) {
  auto S = build_maximal_order(3).gram;
  auto R = siegel_product_quaternary(S, 3);
  EXPECT_EQ(R.value, 288);
  EXPECT_THROW(siegel_product_quaternary(HalfIntMat::diag({1, 1, 1, 3}), 3), usage_error);
  EXPECT_THROW(siegel_product_quaternary(S, 5), usage_error);
}

TEST(Companion, DataAndLimits) {
  auto S = build_maximal_order(3).gram;
  auto C = companion_of(S, 3);
  ASSERT_EQ(C.local.size(), 1u);
  EXPECT_EQ(C.local.at(3), egk_truncate(egk_odd(S, 3)));
  EXPECT_THROW(companion_of(HalfIntMat::diag({1, 1, 3, 3}), 3), unsupported_error);
  EXPECT_THROW(companion_of(S, 5), usage_error);
  EXPECT_EQ(rep_average(S, 3), 2 * rep_average(C));
}

TEST(RepAverage, TernaryGenus) {
  // x^2 + y^2 + 3z^2-type forms from the p = 3 order: R is positive and rational
  auto B = HalfIntMat({{2, 1, 0}, {1, 2, 0}, {0, 0, 6}});
  ASSERT_EQ(diff_set(B), std::vector<long>{3});
  Rat r = rep_average_ternary(B, 3);
  EXPECT_GT(r, 0);
  EXPECT_THROW(rep_average_ternary(B, 5), usage_error);
}
