#include <gtest/gtest.h>

#include <array>

#include "siegel/density.hpp"

using namespace siegel;

namespace {

Poly poly(std::vector<long> c) {
  std::vector<Rat> v(c.begin(), c.end());
  return Poly(v);
}

long nonresidue(long p) {
  long n = 2;
  while (legendre_unit(Rat(n), p) == 1) ++n;
  return n;
}

}  // namespace

TEST(GammaFactor, Shapes) {
  auto g0 = gamma_factor(2, 3, 0);
  EXPECT_EQ(g0.num.c, poly({1, -1, -9, 9}).c);
  EXPECT_EQ(g0.den.c, poly({1}).c);
  auto g1 = gamma_factor(4, 5, -1);
  EXPECT_EQ(g1.den.c, poly({1, 25}).c);
  Rat x(1, 125);
  EXPECT_EQ(g1.eval(x), (1 - x) * (1 - 25 * x * x) * (1 - 625 * x * x) / (1 + 25 * x));
  EXPECT_EQ(g1.eval(Rat(1, 5)), 0);
  // odd size has no denominator
  EXPECT_EQ(gamma_factor(3, 3, 1).den.c, poly({1}).c);
}

TEST(GK, OddPrimeDiagonal) {
  EXPECT_EQ(gk_odd(HalfIntMat::diag({1, 3}), 3).a, (std::vector<int>{0, 1}));
  EXPECT_EQ(gk_odd(HalfIntMat::diag({9, 1}), 3).a, (std::vector<int>{0, 2}));
  EXPECT_EQ(gk_odd(HalfIntMat::diag({1, 1, 3, 3}), 3).a, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(gk_odd(HalfIntMat({{2, 1}, {1, 2}}), 3).a, (std::vector<int>{0, 1}));
}

// the diagonalization route against the lexicographic search over GL_2(Z/p^k)
TEST(GK, BruteforceAgreesOnBinaries) {
  for (auto B : std::vector<std::vector<std::vector<long long>>>{
           {{2, 0}, {0, 6}}, {{2, 1}, {1, 2}}, {{6, 3}, {3, 2}}, {{2, 3}, {3, 14}}, {{2, 0}, {0, 2}}, {{4, 1}, {1, 4}}}) {
    HalfIntMat T(B);
    EXPECT_EQ(gk_bruteforce(T, 3).a, gk_odd(T, 3).a) << T.str();
  }
  EXPECT_THROW(gk_bruteforce(HalfIntMat::diag({1, 81}), 3, 1e3), budget_exceeded);
  EXPECT_THROW(gk_bruteforce(HalfIntMat::diag({1, 1, 1, 1}), 3), usage_error);
}

TEST(EGK, Diagonal) {
  auto H = egk_odd(HalfIntMat::diag({1, 1, 3, 3}), 3);
  EXPECT_EQ(H.a, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(H.eps[0], 1);
  EXPECT_EQ(H.eps[1], -1);  // -1 is a nonsquare mod 3
  EXPECT_EQ(H.eps[3], 1);   // D = 144 is a square
  EXPECT_EQ(H.e(), 2);
  auto Hp = egk_truncate(H);
  EXPECT_EQ(Hp.a, (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(Hp.eps, (std::vector<int>{H.eps[0], H.eps[1], H.eps[2]}));
  EXPECT_THROW(egk_truncate(EGKDatum{{0}, {1}}), usage_error);
}

TEST(EGK, Validation) {
  EXPECT_NO_THROW(validate_egk({{0, 1, 1}, {1, 0, -1}}));
  EXPECT_THROW(validate_egk({{1, 0}, {1, 1}}), usage_error);
  EXPECT_THROW(validate_egk({{0, 1}, {-1, 1}}), usage_error);
  EXPECT_THROW(validate_egk({{0, 1, 2}, {1, 1, 0}}), usage_error);
  EXPECT_THROW(validate_egk({{0, 1}, {1}}), usage_error);
}

TEST(TernaryF, KnownPolynomials) {
  EXPECT_EQ(ternary_F({{0, 0, 1}, {1, -1, -1}}, 3).to_poly().c, poly({1, -9}).c);
  EXPECT_EQ(ternary_F({{0, 0, 2}, {1, -1, 1}}, 3).to_poly().c, poly({1, -9, 81}).c);
  EXPECT_EQ(ternary_F({{0, 0, 0}, {1, 1, 1}}, 3, Reading::Corrected, true).to_poly().c, poly({1}).c);
  EXPECT_THROW(ternary_F({{0, 0, 0}, {1, 1, 1}}, 3), usage_error);
}

// closed ternary formula against the primitive-reduction oracle on the forms that realize each datum
TEST(TernaryF, MatchesReductionOracle) {
  int checked = 0;
  for (long p : {3L, 5L}) {
    long n = nonresidue(p);
    for (int a3 = 0; a3 <= (p == 3 ? 3 : 2); ++a3)
      for (int a2 = 0; a2 <= a3; ++a2)
        for (int a1 = 0; a1 <= a2; ++a1)
          for (int mask = 0; mask < 8; ++mask) {
            int a[3] = {a1, a2, a3};
            std::vector<long long> t;
            for (int i = 0; i < 3; ++i) t.push_back((mask >> i & 1 ? n : 1) * ipow(p, a[i]).get_si());
            auto T = HalfIntMat::diag(t);
            auto H = egk_odd(T, p);
            EXPECT_EQ(ternary_F(H, p, Reading::Corrected, true), reduction_F(T, p)) << H.str() << " @" << p;
            ++checked;
          }
  }
  EXPECT_GT(checked, 100);
}

TEST(TernaryF, SeriesOracleSmall) {
  auto T = HalfIntMat::diag({1, 1, 3});
  auto H = egk_odd(T, 3);
  EXPECT_EQ(H, (EGKDatum{{0, 0, 1}, {1, -1, -1}}));
  EXPECT_EQ(series_F(T, 3).to_poly().c, poly({1, -9}).c);
}

TEST(TernaryF, ReadingsDiffer) {
  // the third double sum only reaches different limits when a1 < a3 - a2 + 2 sigma - 4
  int differ = 0;
  for (int a3 = 0; a3 <= 6; ++a3)
    for (int a2 = 0; a2 <= a3; ++a2)
      for (int a1 = 0; a1 <= a2; ++a1) {
        int s = sigma_of(a1, a2);
        EGKDatum H{{a1, a2, a3}, {1, s == 1 ? 0 : -1, -1}};
        differ += !(ternary_F(H, 3, Reading::Corrected) == ternary_F(H, 3, Reading::AsPrinted));
      }
  EXPECT_GT(differ, 0);
}

TEST(TernaryClosed, ClosedValues) {
  for (long p : {3L, 5L, 7L}) {
    EXPECT_EQ(lemma53_value(0, 1, 1, p), 1 - p * p);
    EXPECT_EQ(lemma53_value(0, 0, 1, p), 1);
  }
}

// sigma = 1 data agree with the double sum; sigma = 2 data follow the a1-exponent simplification instead
TEST(TernaryClosed, AgreementBySigma) {
  for (long p : {3L, 5L, 7L})
    for (int a3 = 0; a3 <= 5; ++a3)
      for (int a2 = 0; a2 <= a3; ++a2)
        for (int a1 = 0; a1 <= a2; ++a1) {
          int s = sigma_of(a1, a2);
          int e2 = s == 1 ? 0 : -1;
          Rat closed = lemma53_value(a1, a2, a3, p);
          if (s == 1) {
            EXPECT_EQ(F_eval(ternary_F({{a1, a2, a3}, {1, e2, -1}}, p), Rat(1, p)), closed);
          }
          EXPECT_EQ(lemma53_specialized(a1, a2, a3, e2, p, Reading::AsPrinted), closed);
        }
  // (0,0,1;1,-1,-1): F = 1 - 9X from the series, so F(1/3) = -2, not 1
  EXPECT_EQ(F_eval(series_F(HalfIntMat::diag({1, 1, 3}), 3), Rat(1, 3)), -2);
  EXPECT_EQ(lemma53_value(0, 0, 1, 3), 1);
}

TEST(QuaternaryF, KnownPolynomial) {
  EGKDatum H{{0, 0, 1, 1}, {1, -1, -1, 1}};
  EXPECT_EQ(F_from_egk(H, 3).to_poly().c, poly({1, -36, 243}).c);
  EXPECT_EQ(F_from_egk(H, 3), reduction_F(HalfIntMat::diag({1, 1, 3, 3}), 3));
}

TEST(QuaternaryF, MatchesReductionOracle) {
  for (long p : {3L, 5L}) {
    long n = nonresidue(p);
    auto shapes = p == 3 ? std::vector<std::array<int, 4>>{{0, 0, 1, 1}, {0, 1, 1, 2}, {0, 0, 2, 2}, {0, 1, 2, 3}, {1, 1, 1, 1}, {0, 0, 1, 3}}
                         : std::vector<std::array<int, 4>>{{0, 0, 1, 1}, {0, 1, 1, 2}, {1, 1, 1, 1}};
    for (auto a : shapes)
      for (int mask = 0; mask < 16; mask += 3) {
        std::vector<long long> t;
        for (int i = 0; i < 4; ++i) t.push_back((mask >> i & 1 ? n : 1) * ipow(p, a[i]).get_si());
        auto T = HalfIntMat::diag(t);
        if (local_invariants(T, p).xi == 0) continue;
        EXPECT_EQ(F_from_egk(egk_odd(T, p), p), reduction_F(T, p)) << T.str() << " @" << p;
      }
  }
}

TEST(TwoFIdentities, Identities) {
  int n = 0;
  for (long p : {3L, 5L, 7L}) {
    long u = nonresidue(p);
    for (long long v : {1L, u})
      for (auto t : std::vector<std::vector<long long>>{{1, v, p, p}, {1, v, p, u * p}, {1, p, v * p, p * p}, {1, v, p * p, p * p * p}, {1, v, p, p * p * p}, {1, p, p, v * p * p}, {1, v, p * p, u * p * p}}) {
        auto T = HalfIntMat::diag(t);
        auto inv = local_invariants(T, p);
        if (!inv.chi_trivial || inv.eta != -1) continue;
        auto R = theorem41_check(egk_odd(T, p), p, true);
        EXPECT_TRUE(R.value_identity) << T.str();
        EXPECT_TRUE(R.derivative_identity) << T.str();
        ++n;
      }
  }
  EXPECT_GE(n, 6);
  EXPECT_THROW(theorem41_check({{0, 0, 1}, {1, -1, -1}}, 3, true), usage_error);
}

TEST(FunctionalEquation, HoldsAndDetectsCorruption) {
  auto F = F_from_egk({{0, 0, 1, 1}, {1, -1, -1, 1}}, 3);
  EXPECT_TRUE(functional_equation_check(F));
  auto bad = F;
  bad.coeffs[2].x += 1;
  EXPECT_FALSE(functional_equation_check(bad));
  // 2-adic quaternary from the reduction: palindromic up to sign
  EXPECT_TRUE(functional_equation_check(reduction_F(HalfIntMat::diag({1, 1, 3, 3}), 2), true));
}
