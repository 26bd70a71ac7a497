#include <gtest/gtest.h>

#include <random>

#include "siegel/io.hpp"

using namespace siegel;

namespace {

HalfIntMat scale_last(const HalfIntMat& S, long long d) {
  auto B = S.B();
  for (int i = 0; i < 4; ++i) {
    B[i][3] *= d;
    B[3][i] *= d;
  }
  return HalfIntMat(B);
}

}  // namespace

TEST(Prefactor, Values) {
  EXPECT_EQ(prop51_prefactor(4), -1152);
  // -2^5 / (zeta(-3) zeta(-1) zeta(-3) zeta(-5))
  EXPECT_EQ(prop51_prefactor(8), -1393459200);
  EXPECT_THROW(prop51_prefactor(6), usage_error);
  EXPECT_THROW(prop51_prefactor(0), usage_error);
}

TEST(C4, MaximalOrders) {
  for (long p : {2L, 3L, 5L, 7L}) {
    auto R = C4(build_maximal_order(p).gram);
    EXPECT_EQ(R.kind, C4Case::ChiTrivialSingleton);
    EXPECT_EQ(R.p, p);
    // -1152 p^{-3} F'(p^-2) with F = 1 - p^2 X... gives -1152 (p-1)/p log p
    EXPECT_EQ(R.C4, ExactScalar(Rat(-1152 * (p - 1)) / p) * ExactScalar::log_prime(p)) << p;
  }
}

TEST(C4, DiagonalExample) {
  // -1152 * 3^-3 * F'_3(1/9) * 2^-2 * F_2(1/4) = -1152 * 18 * 8 / 108
  auto R = C4(HalfIntMat::diag({1, 1, 3, 3}));
  EXPECT_EQ(R.kind, C4Case::ChiTrivialSingleton);
  EXPECT_EQ(R.C4, ExactScalar(Rat(-1536)) * ExactScalar::log_prime(3));
}

TEST(C4, NontrivialCharacter) {
  auto R = C4(HalfIntMat::diag({1, 1, 1, 3}));
  EXPECT_EQ(R.kind, C4Case::ChiNontrivial);
  EXPECT_TRUE(R.diff.empty());
  EXPECT_EQ(R.C4.factors().at({Sym::ClassH, 12}), 1);
  EXPECT_EQ(R.C4.factors().at({Sym::LogUnit, 12}), 1);
}

TEST(C4, DegenerateDiffVanishes) {
  int found = 0;
  for (long a = 1; a <= 7 && !found; ++a)
    for (long b = a; b <= 7 && !found; ++b)
      for (long c = b; c <= 7 && !found; ++c)
        for (long d = c; d <= 7 && !found; ++d) {
          auto T = HalfIntMat::diag({a, b, c, d});
          if (fundamental_discriminant(T.disc()) != 1 || diff_set(T).size() < 3) continue;
          auto R = C4(T);
          EXPECT_EQ(R.kind, C4Case::ChiTrivialDegenerate);
          EXPECT_TRUE(R.C4.is_zero());
          ++found;
        }
  EXPECT_EQ(found, 1);
}

TEST(C4, RejectsBadInput) {
  EXPECT_THROW(C4(HalfIntMat::diag({1, 1, 1})), usage_error);
  EXPECT_THROW(C4(HalfIntMat({{2, 3, 0, 0}, {3, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}})), usage_error);
}

TEST(Thm51, AgreesWithC4) {
  for (long p : {3L, 5L, 7L}) {
    auto S = build_maximal_order(p).gram;
    EXPECT_EQ(thm51_value(S, p), C4(S).C4) << p;
  }
  auto T = scale_last(build_maximal_order(3).gram, 3);
  EXPECT_EQ(thm51_value(T, 3), C4(T).C4);
  EXPECT_THROW(thm51_value(build_maximal_order(2).gram, 2), unsupported_error);
}

TEST(Thm12, DecompositionAndControl) {
  auto S = build_maximal_order(5).gram;
  auto R = thm12_decompose(S);
  EXPECT_TRUE(R.identity);
  EXPECT_FALSE(R.correction.is_zero());
  // deg Z alone does not account for C4
  EXPECT_NE(R.lhs, R.degZ);
  // a wrong companion prime breaks the identity
  auto bad = R;
  bad.degZ = deg_Z(EGKDatum{{0, 1, 3}, {1, 0, -1}}, 5);
  EXPECT_NE(bad.lhs, bad.degZ + bad.correction);
  EXPECT_THROW(thm12_decompose(HalfIntMat::diag({1, 1, 1, 3})), usage_error);
  EXPECT_THROW(thm12_decompose(HalfIntMat::diag({1, 1, 3, 3})), unsupported_error);
}

// the truncated data of anisotropic quaternaries
TEST(DegZ, DatumPositivity) {
  for (long p : {3L, 5L, 7L})
    for (auto& H : anisotropic_data(4)) {
      auto d = deg_Z(egk_truncate(H), p);
      EXPECT_GT(d.coeff(), 0) << H.str() << " @" << p;
      EXPECT_EQ(d.factors().at({Sym::LogPrime, p}), 1);
    }
}

TEST(DegZ, TernaryForms) {
  auto R = deg_Z(HalfIntMat::diag({1, 1, 1}));
  EXPECT_EQ(R.diff, std::vector<long>{2});
  EXPECT_GT(R.value.coeff(), 0);
  // |Diff| = 3 gives zero
  for (long c = 1; c <= 30; ++c) {
    auto B = HalfIntMat::diag({1, 1, c});
    if (diff_set(B).size() == 3) {
      EXPECT_TRUE(deg_Z(B).value.is_zero());
      break;
    }
  }
  EXPECT_THROW(deg_Z(HalfIntMat::diag({1, 1})), usage_error);
}

TEST(RepHalving, FamilyMembers) {
  for (long p : {3L, 5L, 7L}) {
    auto S = build_maximal_order(p).gram;
    EXPECT_TRUE(conjecture51_check(S, p));
    EXPECT_TRUE(conjecture51_check(scale_last(S, p), p));
  }
}

// r < x + y sqrt p against long double on random small rationals
TEST(Surd, ComparisonMatchesFloating) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> d(-40, 40), q(1, 9);
  for (int it = 0; it < 2000; ++it) {
    Rat r(d(rng), q(rng)), x(d(rng), q(rng)), y(d(rng), q(rng));
    r.canonicalize();
    x.canonicalize();
    y.canonicalize();
    long p = it % 2 ? 3 : 7;
    long double lhs = r.get_d(), rhs = x.get_d() + y.get_d() * std::sqrt(static_cast<long double>(p));
    if (std::fabs(static_cast<double>(lhs - rhs)) < 1e-9) continue;
    EXPECT_EQ(less_than_surd(r, x, y, p), lhs < rhs) << r << " " << x << " " << y << " " << p;
  }
  EXPECT_FALSE(less_than_surd(Rat(2), 0, 1, 4));
}

TEST(Cor52, LocalSweepShape) {
  auto data = anisotropic_data(5);
  for (auto& H : data) {
    int odd = 0;
    for (int a : H.a) odd += a % 2;
    EXPECT_EQ(odd, 2);
    EXPECT_EQ(H.eps[2], -1);
  }
  int proof = 0, crude = 0;
  for (auto& H : data) {
    auto r = cor52_local(H, 5);
    proof += r.proof_inequality;
    crude += r.crude_pass;
    EXPECT_TRUE(r.fine_below_crude);
  }
  EXPECT_EQ(proof, static_cast<int>(data.size()));
  EXPECT_EQ(crude, static_cast<int>(data.size()));
}

TEST(Cor52, GlobalMatchesLocal) {
  auto S = build_maximal_order(7).gram;
  auto g = cor52_bounds(S);
  auto l = cor52_local(egk_odd(S, 7), 7);
  EXPECT_EQ(g.lhs, l.lhs);
}

TEST(Triple, SmallCase) {
  auto R = triple_intersection(1, 1, 1);
  EXPECT_EQ(R.table.size(), 23u);
  EXPECT_EQ(R.unsupported, 0);
  EXPECT_EQ(R.total.at(2), ExactScalar(Rat(9)) * ExactScalar::log_prime(2));
  EXPECT_EQ(R.total.at(3), ExactScalar(Rat(3)) * ExactScalar::log_prime(3));
  EXPECT_THROW(triple_intersection(0, 1, 1), usage_error);
}

// relabelling the basis permutes the diagonal and preserves every total
TEST(Triple, PermutationSymmetry) {
  auto a = triple_intersection(1, 2, 3);
  auto b = triple_intersection(3, 1, 2);
  auto c = triple_intersection(2, 3, 1);
  EXPECT_EQ(a.table.size(), b.table.size());
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(a.total, c.total);
  for (auto& r : a.table) {
    if (r.status == "ok" && !r.degZ.is_zero()) {
      EXPECT_GT(r.degZ.coeff(), 0);
    }
  }
}
