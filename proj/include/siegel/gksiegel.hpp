#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "localform.hpp"
#include "poly.hpp"

namespace siegel {

struct GKDatum {
  std::vector<int> a;
  friend bool operator==(const GKDatum& x, const GKDatum& y) { return x.a == y.a; }
};

struct EGKDatum {
  std::vector<int> a;
  std::vector<int> eps;

  int size() const { return static_cast<int>(a.size()); }
  int e() const { return std::accumulate(a.begin(), a.end(), 0); }
  friend bool operator==(const EGKDatum& x, const EGKDatum& y) { return x.a == y.a && x.eps == y.eps; }

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    s += ";";
    for (size_t i = 0; i < eps.size(); ++i) s += (i ? "," : "") + std::to_string(eps[i]);
    return s + ")";
  }
};

inline void validate_egk(const EGKDatum& H) {
  if (H.a.empty() || H.a.size() != H.eps.size()) throw usage_error("EGK datum: a and eps must be nonempty and of equal length");
  for (size_t i = 0; i < H.a.size(); ++i) {
    if (H.a[i] < 0) throw usage_error("EGK datum: negative exponent");
    if (i && H.a[i] < H.a[i - 1]) throw usage_error("EGK datum: exponents must be nondecreasing");
    if (H.eps[i] < -1 || H.eps[i] > 1) throw usage_error("EGK datum: signs must lie in {-1,0,1}");
    if (H.eps[i] == 0 && i % 2 == 0) throw usage_error("EGK datum: a zero sign is only allowed at even positions");
  }
  if (H.eps[0] != 1) throw usage_error("EGK datum: first sign must be 1");
}

// F_p^T stored over Q(sqrt q)
struct SiegelPoly {
  long q = 0;
  int g = 0;
  int e = 0;
  std::vector<Surd> coeffs;

  bool rational() const {
    for (auto& s : coeffs)
      if (s.y != 0) return false;
    return true;
  }

  Poly to_poly() const {
    if (!rational()) throw std::domain_error("SiegelPoly: irrational coefficient remains");
    std::vector<Rat> v;
    for (auto& s : coeffs) v.push_back(s.x);
    return Poly(v);
  }

  static SiegelPoly from_poly(long q, int g, int e, const Poly& P) {
    SiegelPoly S{q, g, e, {}};
    for (auto& x : P.c) S.coeffs.push_back({x, 0});
    return S;
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  friend bool operator==(const SiegelPoly& a, const SiegelPoly& b) {
    return a.q == b.q && a.g == b.g && a.e == b.e && a.coeffs == b.coeffs;
  }
};

inline Rat F_eval(const SiegelPoly& P, const Rat& x) { return P.to_poly().eval(x); }
inline Rat F_deriv_eval(const SiegelPoly& P, const Rat& x) { return P.to_poly().deriv().eval(x); }

struct GammaFactor {
  Poly num, den;
  Rat eval(const Rat& x) const { return num.eval(x) / den.eval(x); }
};

inline GammaFactor gamma_factor(int g, long q, int xi) {
  Poly num = Poly(std::vector<Rat>{1, -1});
  for (int j = 1; j <= g / 2; ++j) num = num * Poly(std::vector<Rat>{1, 0, -Rat(ipow(q, 2 * j))});
  Poly den = Poly::constant(1);
  if (g % 2 == 0 && xi != 0) den = Poly(std::vector<Rat>{1, -xi * Rat(ipow(q, g / 2))});
  return {num, den};
}

inline GKDatum gk_odd(const HalfIntMat& T, long p) {
  GKDatum G;
  for (auto& d : diagonalize_odd(T, p)) G.a.push_back(d.a);
  return G;
}

inline EGKDatum egk_odd(const HalfIntMat& T, long p) {
  auto D = diagonalize_odd(T, p);
  EGKDatum H;
  std::vector<Rat> minor;
  for (size_t i = 0; i < D.size(); ++i) {
    minor.push_back(D[i].t);
    H.a.push_back(D[i].a);
    if ((i + 1) % 2)
      H.eps.push_back(eta_of_diagonal(minor, p));
    else
      H.eps.push_back(xi_of_disc(disc_of_diagonal(minor), p));
  }
  return H;
}

inline EGKDatum egk_truncate(const EGKDatum& H) {
  if (H.size() < 2) throw usage_error("egk_truncate: length must be at least 2");
  EGKDatum R = H;
  R.a.pop_back();
  R.eps.pop_back();
  return R;
}

// Upper limit of the third double sum: the printed a1 or a3
enum class Reading { AsPrinted, Corrected };

inline const char* reading_name(Reading r) { return r == Reading::Corrected ? "corrected" : "as-printed"; }

inline int sigma_of(int a1, int a2) { return ((a1 - a2) % 2 != 0) ? 1 : 2; }

// F^{H'} for a ternary datum (a1,a2,a3;1,e2,e3) from the double-sum expansion of F(p^{-2}X)
inline SiegelPoly ternary_F(const EGKDatum& H, long p, Reading reading = Reading::Corrected, bool allow_split = false) {
  validate_egk(H);
  if (H.size() != 3) throw usage_error("ternary_F: length-3 datum expected");
  int a1 = H.a[0], a2 = H.a[1], a3 = H.a[2], e2 = H.eps[1], e3 = H.eps[2];
  int s = sigma_of(a1, a2);
  if (e3 == 0) throw usage_error("ternary_F: eps3 must be +1 or -1");
  if (!allow_split && e2 == 1) throw usage_error("ternary_F: eps2 = +1 is outside the anisotropic domain");
  if ((e2 == 0) != (s == 1)) throw usage_error("ternary_F: eps2 = 0 exactly when a1 - a2 is odd");
  int M = (a1 + a2 - s) / 2;
  std::map<int, Rat> P;
  for (int i = 0; i <= a1; ++i)
    for (int j = 0; j <= M - i; ++j) P[i + 2 * j] += rpow(Rat(p), i + j);
  for (int i = 0; i <= a1; ++i)
    for (int j = 0; j <= M - i; ++j) P[a3 + s + i + 2 * j] += e3 * rpow(Rat(p), M - j);
  if (e2 != 0) {
    int N = (reading == Reading::Corrected ? a3 : a1) - a2 + 2 * s - 4;
    Rat pre = rpow(Rat(p), (a1 + a2 - s + 2) / 2);
    for (int i = 0; i <= a1; ++i)
      for (int j = 0; j <= N; ++j) P[a2 - s + 2 + i + j] += pre * ((j % 2 && e2 == -1) ? -1 : 1);
  }
  int deg = P.empty() ? 0 : P.rbegin()->first;
  std::vector<Rat> c(deg + 1, Rat(0));
  for (auto& [k, v] : P) c[k] = v * rpow(Rat(p), 2 * k);
  return SiegelPoly::from_poly(p, 3, a1 + a2 + a3, Poly(c));
}

// closed values at X = p^{-1} as stated for anisotropic data
inline Rat lemma53_value(int a1, int a2, int a3, long p) {
  if (a1 < 0 || a1 > a2 || a2 > a3) throw usage_error("lemma53_value: need 0 <= a1 <= a2 <= a3");
  Rat P(p);
  auto pw = [&](int k) { return rpow(P, k); };
  Rat A = (pw(a1 + 1) - 1) / ((P - 1) * (pw(3) - 1));
  Rat B = (pw(a1 + 1) + 1) / (P + 1);
  Rat C = (pw(a1 + 1) - 1) / (P - 1);
  if ((a1 - a2) % 2 != 0) {
    return A * (pw((a1 + 3 * (a2 + 1)) / 2) - B) - pw((a1 + a2 + 2 * a3 + 1) / 2) / (P - 1) * ((a1 + 1) * pw((a1 + a2 + 1) / 2) - C);
  }
  return A * (pw((a1 + 3 * a2) / 2) - B) - pw((a1 + a2 + 2 * a3 + 2) / 2) / (P - 1) * ((a1 + 1) * pw((a1 + a2) / 2) - C) +
         pw((a1 + 3 * a2) / 2) * (pw(a1 + 1) - 1) / (P * P - 1) * (pw(a1 - a2 + 1) + 1);
}

// the specialization at X = p, eps3 = -1 of the double sum, in closed form, under either reading
inline Rat lemma53_specialized(int a1, int a2, int a3, int e2, long p, Reading reading) {
  Rat P(p);
  auto pw = [&](int k) { return rpow(P, k); };
  int s = sigma_of(a1, a2);
  Rat A = (pw(a1 + 1) - 1) / ((P - 1) * (pw(3) - 1));
  Rat v = A * (pw((a1 + 3 * (a2 - s + 2)) / 2) - (pw(a1 + 1) + 1) / (P + 1));
  v -= pw((a1 + a2 + 2 * a3 + s) / 2) / (P - 1) * ((a1 + 1) * pw((a1 + a2 - s + 2) / 2) - (pw(a1 + 1) - 1) / (P - 1));
  if (e2 != 0) {
    int N = (reading == Reading::Corrected ? a3 : a1) - a2 + 2 * s - 3;
    Rat ep = e2 * P;
    v += pw((a1 + 3 * (a2 - s + 2)) / 2) * (pw(a1 + 1) - 1) * (1 - rpow(ep, N)) / ((P - 1) * (1 - ep));
  }
  return v;
}

inline Poly unary_F(int a, long q) {
  std::vector<Rat> c;
  for (int k = 0; k <= a; ++k) c.push_back(Rat(ipow(q, k)));
  return Poly(c);
}

// one step of the even-length recursion: F^H from F^{H'}
inline SiegelPoly onestep(const EGKDatum& H, long q, const Poly& Fprime) {
  validate_egk(H);
  int g = H.size();
  if (g % 2) throw usage_error("onestep: even length required");
  int xi = H.eps.back();
  if (xi == 0) throw usage_error("onestep: xi = 0 (ramified character) is not covered");
  int e = H.e();
  if (e % 2) throw usage_error("onestep: e must be even when xi != 0");
  SurdField K{q};
  Laurent A;
  int shift = -(e + 2) / 2;
  for (int j = 0; j <= Fprime.degree(); ++j) {
    Surd c = K.scal(K.halfpow(static_cast<long>(j) * (1 - g)), Fprime[j]);
    laurent_add(K, A, shift + j, c);
    laurent_add(K, A, shift + j + 1, K.scal(K.mul(c, K.halfpow(-1)), Rat(-xi)));
  }
  // numerator A(X) - A(1/X), times X
  Laurent Mx;
  for (auto& [k, v] : A) {
    laurent_add(K, Mx, k + 1, v);
    laurent_add(K, Mx, -k + 1, K.scal(v, Rat(-1)));
  }
  if (Mx.empty()) throw std::logic_error("onestep: vanishing numerator");
  int kmin = Mx.begin()->first, kmax = Mx.rbegin()->first;
  std::map<int, Surd> Qc;
  for (int k = kmin; k <= kmax; ++k) {
    Surd m = Mx.count(k) ? Mx[k] : Surd{};
    Surd prev = Qc.count(k - 2) ? Qc[k - 2] : Surd{};
    Qc[k] = K.add(m, prev);
  }
  for (int k = std::max(kmin, kmax - 1); k <= kmax; ++k)
    if (!Qc[k].is_zero()) throw identity_failure("onestep: numerator not divisible by 1 - X^2");
  SiegelPoly S{q, g, e, std::vector<Surd>(e + 1)};
  for (auto& [k, v] : Qc) {
    if (v.is_zero()) continue;
    int n = k + e / 2;
    if (n < 0 || n > e) throw identity_failure("onestep: term outside degree range");
    S.coeffs[n] = K.mul(v, K.halfpow(static_cast<long>(g + 1) * n));
  }
  if (!S.rational()) throw identity_failure("onestep: half powers of q did not cancel for " + H.str());
  Poly P = S.to_poly();
  if (!P.integral()) throw identity_failure("onestep: non-integral coefficient for " + H.str());
  if (P[0] != 1) throw identity_failure("onestep: constant term differs from 1 for " + H.str());
  while (S.coeffs.size() > 1 && S.coeffs.back().is_zero()) S.coeffs.pop_back();
  return S;
}

inline SiegelPoly binary_F_onestep(const EGKDatum& H, long q) {
  if (H.size() != 2) throw usage_error("binary_F_onestep: length-2 datum expected");
  return onestep(H, q, unary_F(H.a[0], q));
}

inline SiegelPoly quaternary_F_onestep(const EGKDatum& H, long q, Reading reading = Reading::Corrected) {
  if (H.size() != 4) throw usage_error("quaternary_F_onestep: length-4 datum expected");
  auto Fp = ternary_F(egk_truncate(H), q, reading, true);
  return onestep(H, q, Fp.to_poly());
}

// F for a datum of length 1..4 through the chain of closed forms
inline SiegelPoly F_from_egk(const EGKDatum& H, long q, Reading reading = Reading::Corrected) {
  switch (H.size()) {
    case 1: return SiegelPoly::from_poly(q, 1, H.a[0], unary_F(H.a[0], q));
    case 2: return binary_F_onestep(H, q);
    case 3: return ternary_F(H, q, reading, true);
    case 4: return quaternary_F_onestep(H, q, reading);
    default: throw usage_error("F_from_egk: length 1..4 supported");
  }
}

struct Thm41Report {
  bool value_identity = false;
  bool derivative_checked = false;
  bool derivative_identity = false;
  Rat lhs_value, rhs_value, lhs_deriv, rhs_deriv;
};

// eta = -1 is signalled by the caller (it is a property of the form, not of the datum)
inline Thm41Report theorem41_check(const EGKDatum& H, long q, bool eta_minus, Reading reading = Reading::Corrected) {
  int g = H.size();
  if (g % 2) throw usage_error("theorem41_check: even length required");
  int xi = H.eps.back();
  if (xi == 0) throw usage_error("theorem41_check: xi = 0");
  auto FH = F_from_egk(H, q, reading).to_poly();
  auto FHp = F_from_egk(egk_truncate(H), q, reading).to_poly();
  int e = H.e();
  Rat x = Rat(xi) * rpow(Rat(q), -g / 2);
  Thm41Report R;
  R.lhs_value = FH.eval(x);
  R.rhs_value = rpow(Rat(q), e / 2) * FHp.eval(x);
  R.value_identity = (R.lhs_value == R.rhs_value);
  if (eta_minus) {
    R.derivative_checked = true;
    // xi q^{(2-g)/2}: g even so the exponent is an integer
    Rat x2 = Rat(xi) * rpow(Rat(q), (2 - g) / 2);
    R.lhs_deriv = x * FH.deriv().eval(x);
    R.rhs_deriv = FHp.eval(x2) / (q - 1) - rpow(Rat(q), e / 2) * x * FHp.deriv().eval(x);
    R.derivative_identity = (R.lhs_deriv == R.rhs_deriv);
  }
  return R;
}

// X^{-e/2} F(q^{-(g+1)/2} X) invariant under X -> 1/X (sign -1 accepted when allow_sign)
inline bool functional_equation_check(const SiegelPoly& P, bool allow_sign = false) {
  if (P.g % 2) throw usage_error("functional_equation_check: even g required");
  if (!P.rational()) return false;
  auto F = P.to_poly();
  int e = P.e;
  if (F.degree() > e || e % 2) return false;
  for (int sgn : {1, -1}) {
    if (sgn == -1 && !allow_sign) break;
    bool ok = true;
    for (int k = 0; k <= e && ok; ++k) {
      long ex = static_cast<long>(P.g + 1) * (e - 2 * k);
      if (ex % 2) return false;
      if (F[e - k] != sgn * F[k] * rpow(Rat(P.q), ex / 2)) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

namespace detail {
inline GKDatum greatest_in_S(const std::vector<std::vector<long long>>& B, long p, int cap) {
  int g = static_cast<int>(B.size());
  auto ordc = [&](long long x, int shift) {
    if (x == 0) return cap;
    int k = 0;
    while (x % p == 0) { x /= p; ++k; }
    return std::min(cap, k - shift);
  };
  std::vector<std::vector<int>> o(g, std::vector<int>(g));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) o[i][j] = (i == j) ? ordc(B[i][i], p == 2 ? 1 : 0) : ordc(B[i][j], 0);
  std::vector<int> a(g, 0);
  auto feasible = [&](int k) {
    for (int i = 0; i < g; ++i) {
      int ai = i <= k ? a[i] : a[k];
      if (ai > o[i][i]) return false;
      for (int j = i + 1; j < g; ++j) {
        int aj = j <= k ? a[j] : a[k];
        if (ai + aj > 2 * o[i][j]) return false;
      }
    }
    return true;
  };
  for (int k = 0; k < g; ++k) {
    int lo = k ? a[k - 1] : 0;
    a[k] = lo;
    while (a[k] + 1 <= cap) {
      ++a[k];
      if (!feasible(k)) { --a[k]; break; }
    }
  }
  return {a};
}
}  // namespace detail

// lexicographic maximum of S(T[U]) over U in GL_g(Z/p^{K+1}), K = ord det(2T) + 1
inline GKDatum gk_bruteforce(const HalfIntMat& T, long p, double max_ops = 1e9) {
  int g = T.size();
  if (g > 3) throw usage_error("gk_bruteforce: size at most 3");
  Int d = T.det2T();
  if (d == 0) throw usage_error("gk_bruteforce: singular matrix");
  int K = ord_p(d, p) + 1;
  long long mod = ipow(p, K + 1).get_si();
  double cost = std::pow(static_cast<double>(mod), g * g);
  if (cost > max_ops) throw budget_exceeded("gk_bruteforce", cost);
  int cap = K + 2;
  GKDatum best{std::vector<int>(g, 0)};
  std::vector<std::vector<long long>> U(g, std::vector<long long>(g));
  long long total = 1;
  for (int i = 0; i < g * g; ++i) total *= mod;
  for (long long idx = 0; idx < total; ++idx) {
    long long r = idx;
    for (int i = 0; i < g * g; ++i) {
      U[i / g][i % g] = r % mod;
      r /= mod;
    }
    Int du = HalfIntMat::det_int(U);
    if (mpz_divisible_ui_p(du.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    auto TU = T.transform(U);
    auto G = detail::greatest_in_S(TU.B(), p, cap);
    if (G.a > best.a) best = G;
  }
  return best;
}

}  // namespace siegel
