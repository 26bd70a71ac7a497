#pragma once

#include <string>
#include <vector>

#include "siegelmass.hpp"

namespace siegel {

inline Rat prop51_prefactor(int g) {
  if (g <= 0 || g % 4) throw usage_error("prop51_prefactor: g must be a positive multiple of 4");
  Rat den = zeta_negative_odd(g / 4);
  for (int i = 1; i <= (g - 2) / 2; ++i) den *= zeta_negative_odd(i);
  return -rpow(Rat(2), (g + 2) / 2) / den;
}

enum class C4Case { ChiTrivialSingleton, ChiTrivialDegenerate, ChiNontrivial };

inline const char* case_name(C4Case c) {
  switch (c) {
    case C4Case::ChiTrivialSingleton: return "chi_trivial_singleton";
    case C4Case::ChiTrivialDegenerate: return "chi_trivial_degenerate";
    default: return "chi_nontrivial";
  }
}

struct NamedFactor {
  std::string name;
  ExactScalar value;
};

struct CoefficientReport {
  HalfIntMat T;
  C4Case kind = C4Case::ChiTrivialDegenerate;
  long p = 0;
  std::vector<long> diff;
  ExactScalar C4;
  std::vector<NamedFactor> factors;
  std::string companion;
  ExactScalar lhs, degZ, correction;
  bool identity = false;
  Rat ratio_lhs, ratio_rhs_fine_x, ratio_rhs_fine_y;
};

namespace detail {
// F_p^T of a quaternary form at the prime of Diff
inline SiegelPoly quaternary_F_at(const HalfIntMat& T, long p, const Budget& budget) {
  if (p != 2) return F_from_egk(egk_odd(T, p), p);
  try {
    return reduction_F(T, p, budget);
  } catch (const budget_exceeded& ex) {
    throw unsupported_error(std::string("F_2^T is out of reach: ") + ex.what());
  }
}
}  // namespace detail

inline CoefficientReport C4(const HalfIntMat& T, const Budget& budget = {}) {
  if (T.size() != 4 || !T.positive_definite()) throw usage_error("C4: positive definite 4x4 input required");
  CoefficientReport R;
  R.T = T;
  Int D = T.disc();
  Int df = fundamental_discriminant(D);
  Rat pre = prop51_prefactor(4);
  R.factors.push_back({"prefactor", ExactScalar(pre)});
  if (df == 1) {
    R.diff = diff_set(T);
    if (R.diff.size() != 1) {
      R.kind = C4Case::ChiTrivialDegenerate;
      R.C4 = ExactScalar();
      return R;
    }
    R.kind = C4Case::ChiTrivialSingleton;
    long p = R.p = R.diff[0];
    int e = local_invariants(T, p).e;
    auto F = detail::quaternary_F_at(T, p, budget);
    Rat dF = F_deriv_eval(F, Rat(1, p * p));
    ExactScalar v = ExactScalar(pre * rpow(Rat(p), -(4 + e) / 2) * dF) * ExactScalar::log_prime(p);
    R.factors.push_back({"p^{-(4+e)/2}", ExactScalar(rpow(Rat(p), -(4 + e) / 2))});
    R.factors.push_back({"log " + std::to_string(p), ExactScalar::log_prime(p)});
    R.factors.push_back({"F'_" + std::to_string(p) + "(p^-2)", ExactScalar(dF)});
    for (long l : prime_divisors(D)) {
      if (l == p) continue;
      auto L = local_F(T, l, budget);
      int el = local_invariants(T, l).e;
      Rat f = rpow(Rat(l), -el / 2) * L.value;
      R.factors.push_back({"l=" + std::to_string(l) + " [" + L.method + "]", ExactScalar(f)});
      v *= ExactScalar(f);
    }
    R.C4 = v;
    return R;
  }
  R.kind = C4Case::ChiNontrivial;
  R.diff = {};
  ExactScalar v = ExactScalar(pre) * L_one(df);
  R.factors.push_back({"L(1,chi)", L_one(df)});
  for (long l : prime_divisors(D)) {
    auto L = local_F(T, l, budget);
    int el = local_invariants(T, l).e;
    if (el % 2) throw std::logic_error("C4: odd e at a prime of D");
    Rat f = rpow(Rat(l), -el / 2) * L.value;
    R.factors.push_back({"l=" + std::to_string(l) + " [" + L.method + "]", ExactScalar(f)});
    v *= ExactScalar(f);
  }
  R.C4 = v;
  return R;
}

// the bracket p^-2 F'(p^-2) - F(p^-1) / (p^{e/2}(p-1)) at the ternary datum
inline Rat thm51_bracket(const EGKDatum& Hp, long p, int e, Reading reading = Reading::Corrected) {
  auto F = ternary_F(Hp, p, reading, true);
  return Rat(1, p * p) * F_deriv_eval(F, Rat(1, p * p)) - F_eval(F, Rat(1, p)) / (rpow(Rat(p), e / 2) * (p - 1));
}

inline ExactScalar thm51_value(const HalfIntMat& T, long p, const Budget& budget = {}, Reading reading = Reading::Corrected) {
  if (p == 2) throw unsupported_error("thm51_value: the odd-p EGK construction is required");
  check_genus(T, p);
  auto Hp = egk_truncate(egk_odd(T, p));
  int e = local_invariants(T, p).e;
  Rat c = 576 * thm51_bracket(Hp, p, e, reading) * rep_average(T, p, budget);
  return ExactScalar(c) * ExactScalar::log_prime(p);
}

// -(log p)/(2p^2) F'(p^-2) R for a ternary datum
inline ExactScalar deg_Z(const Companion& C, Reading reading = Reading::Corrected) {
  long p = C.p;
  auto F = ternary_F(C.local.at(p), p, reading, true);
  Rat v = -F_deriv_eval(F, Rat(1, p * p)) / (2 * p * p) * rep_average(C, reading);
  return ExactScalar(v) * ExactScalar::log_prime(p);
}

// datum-level form: no other prime carries a nontrivial factor
inline ExactScalar deg_Z(const EGKDatum& Hp, long p, Reading reading = Reading::Corrected) {
  Companion C;
  C.p = p;
  C.local[p] = Hp;
  return deg_Z(C, reading);
}

struct DegZReport {
  std::vector<long> diff;
  long p = 0;
  ExactScalar value;
  std::string method;
};

inline DegZReport deg_Z(const HalfIntMat& B, const Budget& budget = {}) {
  if (B.size() != 3 || !B.positive_definite()) throw usage_error("deg_Z: positive definite ternary input required");
  DegZReport R;
  R.diff = diff_set(B);
  if (R.diff.size() != 1) return R;
  long p = R.p = R.diff[0];
  LocalFactor Lp = local_F(B, p, budget);
  R.method = Lp.method;
  Rat v = -F_deriv_eval(Lp.F, Rat(1, p * p)) / (2 * p * p) * rep_average_ternary(B, p, budget);
  R.value = ExactScalar(v) * ExactScalar::log_prime(p);
  return R;
}

inline CoefficientReport thm12_decompose(const HalfIntMat& T, const Budget& budget = {}, Reading reading = Reading::Corrected) {
  CoefficientReport R = C4(T, budget);
  if (R.kind != C4Case::ChiTrivialSingleton) throw usage_error("thm12_decompose: chi_T trivial and a singleton Diff required");
  long p = R.p;
  if (p == 2) throw unsupported_error("thm12_decompose: the ternary companion at p = 2 is not constructed");
  auto C = companion_of(T, p);
  R.companion = C.str();
  int e = local_invariants(T, p).e;
  R.lhs = R.C4 / ExactScalar(Rat(-2304));
  R.degZ = deg_Z(C, reading);
  auto F = ternary_F(C.local.at(p), p, reading, true);
  R.correction = ExactScalar(F_eval(F, Rat(1, p)) / (2 * rpow(Rat(p), e / 2) * (p - 1)) * rep_average(C, reading)) *
                 ExactScalar::log_prime(p);
  R.identity = (R.lhs == R.degZ + R.correction);
  return R;
}

inline bool conjecture51_check(const HalfIntMat& T, long p, const Budget& budget = {}) {
  return rep_average(T, p, budget) == 2 * rep_average(companion_of(T, p));
}

// r < x + y sqrt(p), exactly
inline bool less_than_surd(const Rat& r, const Rat& x, const Rat& y, long p) {
  Rat d = r - x;
  Rat rhs2 = y * y * p;
  if (y >= 0) return d < 0 || d * d < rhs2;
  return d < 0 && d * d > rhs2;
}

// p^{k/2} as (rational, sqrt p part)
inline std::pair<Rat, Rat> half_power(long p, long k) {
  if (k % 2 == 0) return {rpow(Rat(p), k / 2), 0};
  return {0, rpow(Rat(p), (k - 1) / 2)};
}

struct Cor52Report {
  EGKDatum H;
  long p = 0;
  int sigma = 0;
  Rat lhs;
  Rat fine_x, fine_y, crude_y;  // bounds as x + y sqrt(p)
  bool crude_pass = false, fine_pass = false, fine_below_crude = false;
  bool proof_inequality = false;
  double lhs_numeric = 0, fine_numeric = 0, crude_numeric = 0;
};

// local form of the corollary: the ratio depends only on the datum and p
inline Cor52Report cor52_local(const EGKDatum& H, long p, Reading reading = Reading::Corrected) {
  if (H.size() != 4) throw usage_error("cor52_local: length-4 datum expected");
  Cor52Report R;
  R.H = H;
  R.p = p;
  int a1 = H.a[0], a2 = H.a[1], a4 = H.a[3];
  int s = R.sigma = sigma_of(a1, a2);
  int e = H.e();
  if (e % 2) throw usage_error("cor52_local: e must be even");
  auto F = ternary_F(egk_truncate(H), p, reading, true);
  Rat dF = F_deriv_eval(F, Rat(1, p * p));
  if (dF == 0) throw usage_error("cor52_local: deg Z vanishes");
  Rat Fp = F_eval(F, Rat(1, p));
  // C4 / (-2^8 3^2 deg Z) - 1 = -p^2 F(1/p) / (p^{e/2} (p-1) F'(p^-2))
  R.lhs = abs(-Rat(p * p) * Fp / (rpow(Rat(p), e / 2) * (p - 1) * dF));
  // (4/(p sqrt p)) (p^{-(a4-3+s)/2} + 4 p^{-(a4-a1)/2}/(a1+1)),  4/(p sqrt p) = 4 p^{-2} sqrt p
  auto t1 = half_power(p, -(a4 - 3 + s));
  auto t2 = half_power(p, -(a4 - a1));
  Rat bx = t1.first + 4 * t2.first / (a1 + 1);
  Rat by = t1.second + 4 * t2.second / (a1 + 1);
  // (bx + by sqrt p) * (4/p^2) sqrt p = 4/p^2 (by p + bx sqrt p)
  R.fine_x = (Rat(4) / (p * p)) * by * p;
  R.fine_y = (Rat(4) / (p * p)) * bx;
  R.crude_y = (Rat(20) / (p * p));
  R.crude_pass = less_than_surd(R.lhs, 0, R.crude_y, p);
  R.fine_pass = less_than_surd(R.lhs, R.fine_x, R.fine_y, p);
  // fine < crude  <=>  fine_x < (crude_y - fine_y) sqrt p
  R.fine_below_crude = less_than_surd(R.fine_x, 0, R.crude_y - R.fine_y, p);
  int ex = a1 + a2 - (2 - s);
  R.proof_inequality = (-dF / (p * p) >= (a1 + 1) * rpow(Rat(p), ex / 2));
  double sp = std::sqrt(static_cast<double>(p));
  R.lhs_numeric = R.lhs.get_d();
  R.fine_numeric = R.fine_x.get_d() + R.fine_y.get_d() * sp;
  R.crude_numeric = R.crude_y.get_d() * sp;
  return R;
}

// admissible anisotropic data (a1..a4; 1, eps2, -1, 1) with a4 <= amax
inline std::vector<EGKDatum> anisotropic_data(int amax) {
  std::vector<EGKDatum> out;
  for (int a4 = 0; a4 <= amax; ++a4)
    for (int a3 = 0; a3 <= a4; ++a3)
      for (int a2 = 0; a2 <= a3; ++a2)
        for (int a1 = 0; a1 <= a2; ++a1) {
          int odd = a1 % 2 + a2 % 2 + a3 % 2 + a4 % 2;
          if (odd != 2) continue;
          int s = sigma_of(a1, a2);
          out.push_back({{a1, a2, a3, a4}, {1, s == 1 ? 0 : -1, -1, 1}});
        }
  return out;
}

// global form: ratio from C4 and deg Z of the companion
inline Cor52Report cor52_bounds(const HalfIntMat& T, const Budget& budget = {}, Reading reading = Reading::Corrected) {
  auto R12 = thm12_decompose(T, budget, reading);
  long p = R12.p;
  if (R12.degZ.is_zero()) throw usage_error("cor52_bounds: deg Z(T') = 0");
  auto H = egk_odd(T, p);
  Cor52Report R = cor52_local(H, p, reading);
  ExactScalar ratio = R12.C4 / (ExactScalar(Rat(-2304)) * R12.degZ);
  if (!ratio.is_rational()) throw identity_failure("cor52_bounds: log p did not cancel");
  Rat lhs = abs(ratio.coeff() - 1);
  if (lhs != R.lhs) throw identity_failure("cor52_bounds: global and local ratios differ");
  return R;
}

struct TripleRow {
  HalfIntMat B;
  std::vector<long> diff;
  long p = 0;
  ExactScalar degZ;
  std::string status;  // "zero", "ok", or the unsupported reason
};

struct TripleReport {
  std::vector<TripleRow> table;
  std::map<long, ExactScalar> total;
  int unsupported = 0;
};

inline TripleReport triple_intersection(long m1, long m2, long m3, const Budget& budget = {}) {
  if (m1 < 1 || m2 < 1 || m3 < 1) throw usage_error("triple_intersection: m_i must be positive");
  if (m1 > 20 || m2 > 20 || m3 > 20) throw usage_error("triple_intersection: m_i <= 20 supported");
  auto lim = [](long a, long b) { return isqrt(Int(4 * a * b)).get_si(); };
  TripleReport R;
  long l12 = lim(m1, m2), l13 = lim(m1, m3), l23 = lim(m2, m3);
  for (long b12 = -l12; b12 <= l12; ++b12)
    for (long b13 = -l13; b13 <= l13; ++b13)
      for (long b23 = -l23; b23 <= l23; ++b23) {
        HalfIntMat B({{2 * m1, b12, b13}, {b12, 2 * m2, b23}, {b13, b23, 2 * m3}});
        if (!B.positive_definite()) continue;
        TripleRow row;
        row.B = B;
        try {
          auto d = deg_Z(B, budget);
          row.diff = d.diff;
          row.p = d.p;
          row.degZ = d.value;
          row.status = d.diff.size() == 1 ? "ok" : "zero";
          if (d.diff.size() == 1) {
            auto& t = R.total[d.p];
            t = t.is_zero() ? d.value : t + d.value;
          }
        } catch (const unsupported_error& ex) {
          row.diff = diff_set(B);
          row.p = row.diff.size() == 1 ? row.diff[0] : 0;
          row.status = std::string("unsupported: ") + ex.what();
          ++R.unsupported;
        }
        R.table.push_back(row);
      }
  return R;
}

}  // namespace siegel
