#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "density.hpp"

namespace siegel {

// --- quaternion algebras (a,b)_Q ----------------------------------------------

using Quat = std::array<Rat, 4>;

struct QuatAlgebra {
  Rat a, b;

  Quat mul(const Quat& x, const Quat& y) const {
    return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
  }
  Rat nrd(const Quat& x) const { return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]; }
  // Tr(x conj(y))
  Rat trace_form(const Quat& x, const Quat& y) const {
    return 2 * (x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + a * b * x[3] * y[3]);
  }
};

struct GenusDescriptor {
  long p = 0;
  QuatAlgebra algebra;
  std::vector<Quat> basis;
  HalfIntMat gram;
  Int dual_index;
  std::vector<long> diff;
};

namespace detail {
// coordinates of x in the given basis (basis is invertible over Q)
inline std::vector<Rat> solve_coords(const std::vector<Quat>& basis, const Quat& x) {
  std::vector<std::vector<Rat>> A(4, std::vector<Rat>(5));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) A[r][c] = basis[c][r];
    A[r][4] = x[r];
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    while (A[piv][c] == 0) ++piv;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Rat f = A[r][c] / A[c][c];
      for (int k = c; k < 5; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<Rat> out(4);
  for (int c = 0; c < 4; ++c) out[c] = A[c][4] / A[c][c];
  return out;
}
}  // namespace detail

inline GenusDescriptor build_maximal_order(long p) {
  if (p < 2 || !is_prime(p)) throw usage_error("build_maximal_order: p must be prime");
  if (p > 100000) throw unsupported_error("build_maximal_order: p too large for 64-bit Gram entries");
  Rat h(1, 2), q(1, 4);
  GenusDescriptor G;
  G.p = p;
  if (p == 2) {
    G.algebra = {-1, -1};
    G.basis = {Quat{1, 0, 0, 0}, Quat{0, 1, 0, 0}, Quat{0, 0, 1, 0}, Quat{h, h, h, h}};
  } else if (p % 4 == 3) {
    G.algebra = {-1, Rat(-p)};
    G.basis = {Quat{1, 0, 0, 0}, Quat{0, 1, 0, 0}, Quat{0, h, h, 0}, Quat{h, 0, 0, h}};
  } else if (p % 8 == 5) {
    G.algebra = {-2, Rat(-p)};
    G.basis = {Quat{h, 0, h, h}, Quat{0, q, h, q}, Quat{0, 0, 1, 0}, Quat{0, 0, 0, 1}};
  } else {
    // (-p,-l) with l = 3 mod 4 prime and p a nonresidue mod l; l | c^2 p + 1
    long l = 3;
    while (!(is_prime(l) && l % 4 == 3 && kronecker(p, l) == -1)) ++l;
    long c = 0;
    while ((c * c % l * (p % l) + 1) % l != 0) ++c;
    G.algebra = {Rat(-p), Rat(-l)};
    G.basis = {Quat{h, 0, h, 0}, Quat{0, h, 0, h}, Quat{0, 0, Rat(1, l), Rat(c, l)}, Quat{0, 0, 0, 1}};
  }
  std::vector<std::vector<long long>> B(4, std::vector<long long>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Rat t = G.algebra.trace_form(G.basis[i], G.basis[j]);
      if (t.get_den() != 1) throw std::logic_error("build_maximal_order: non-integral trace form");
      B[i][j] = t.get_num().get_si();
    }
  G.gram = HalfIntMat(B);
  // closure under multiplication and 1 in the span
  auto integral = [&](const Quat& x) {
    for (auto& c : detail::solve_coords(G.basis, x))
      if (c.get_den() != 1) return false;
    return true;
  };
  if (!integral(Quat{1, 0, 0, 0})) throw std::logic_error("build_maximal_order: 1 not in the order");
  for (auto& x : G.basis)
    for (auto& y : G.basis)
      if (!integral(G.algebra.mul(x, y))) throw std::logic_error("build_maximal_order: basis not closed under multiplication");
  G.dual_index = G.gram.det2T();
  if (G.dual_index != Int(p) * p) throw std::logic_error("build_maximal_order: [L*:L] differs from p^2");
  if (!G.gram.positive_definite()) throw std::logic_error("build_maximal_order: norm form not positive definite");
  if (eta(G.gram, p) != -1) throw std::logic_error("build_maximal_order: eta_p(S_p) != -1");
  auto inv = local_invariants(G.gram, p);
  if (inv.e != 2) throw std::logic_error("build_maximal_order: e_p(S_p) != 2");
  G.diff = diff_set(G.gram);
  if (G.diff != std::vector<long>{p}) throw std::logic_error("build_maximal_order: Diff(S_p) != {p}");
  return G;
}

// --- automorphism oracle ------------------------------------------------------

// #{U in GL_n(Z): U^t B U = B} for a positive definite B, by short vectors and backtracking
inline long long automorphism_count(const HalfIntMat& S) {
  int n = S.size();
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A[i][j] = Rat(to_int(S.b(i, j)));
    A[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (A[piv][c] == 0) ++piv;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Rat f = A[r][c] / A[c][c];
      for (int k = 0; k < 2 * n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  long long maxnorm = 0;
  for (int i = 0; i < n; ++i) maxnorm = std::max(maxnorm, S.b(i, i));
  // |v_i|^2 <= (vBv) * (B^{-1})_{ii}
  std::vector<long long> bound(n);
  for (int i = 0; i < n; ++i) {
    Rat inv = A[i][n + i] / A[i][i];
    Rat r = inv * Rat(to_int(maxnorm));
    bound[i] = isqrt(r.get_num() / r.get_den()).get_si() + 1;
  }
  auto norm2 = [&](const std::vector<long long>& v) {
    long long s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += v[i] * S.b(i, j) * v[j];
    return s;
  };
  auto ip = [&](const std::vector<long long>& v, const std::vector<long long>& w) {
    long long s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += v[i] * S.b(i, j) * w[j];
    return s;
  };
  std::map<long long, std::vector<std::vector<long long>>> shortv;
  std::vector<long long> v(n);
  std::function<void(int)> gen = [&](int i) {
    if (i == n) {
      long long m = norm2(v);
      if (m > 0 && m <= maxnorm) shortv[m].push_back(v);
      return;
    }
    for (long long x = -bound[i]; x <= bound[i]; ++x) {
      v[i] = x;
      gen(i + 1);
    }
  };
  gen(0);
  std::vector<std::vector<long long>> img(n);
  long long count = 0;
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      std::vector<std::vector<long long>> U(n, std::vector<long long>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) U[j][i] = img[i][j];
      Int d = HalfIntMat::det_int(U);
      if (d == 1 || d == -1) ++count;
      return;
    }
    for (auto& w : shortv[S.b(k, k)]) {
      bool ok = true;
      for (int j = 0; j < k && ok; ++j)
        if (ip(img[j], w) != S.b(j, k)) ok = false;
      if (!ok) continue;
      img[k] = w;
      rec(k + 1);
    }
  };
  rec(0);
  return count;
}

// --- densities ----------------------------------------------------------------

// prod_{i=lo}^{4} pi^{i/2} / Gamma(i/2) = 2 pi^4 for lo = 1 and lo = 2
inline ExactScalar gamma_product(int lo) {
  // Gamma(i/2) = c * pi^{h/2}
  Rat c = 1;
  int half_pi = 0;
  for (int i = lo; i <= 4; ++i) {
    half_pi += i;
    // Gamma(i/2)
    Rat g = 1;
    int gp = 0;
    if (i % 2 == 0) {
      for (int k = 1; k < i / 2; ++k) g *= k;
    } else {
      gp = 1;
      for (int k = 1; 2 * k < i; ++k) g *= Rat(2 * k - 1, 2);
    }
    c /= g;
    half_pi -= gp;
  }
  if (half_pi % 2) throw std::logic_error("gamma_product: odd power of sqrt(pi)");
  return ExactScalar(c, half_pi / 2, {});
}

inline ExactScalar archimedean_density(int rank, const HalfIntMat& T, const Int& dual_index) {
  if (rank != 3 && rank != 4) throw usage_error("archimedean_density: rank must be 3 or 4");
  if (T.size() != rank || !T.positive_definite()) throw usage_error("archimedean_density: positive definite input of the given rank required");
  if (rank == 4) {
    Int d = T.det2T();
    ExactScalar sq = is_square(d) ? ExactScalar(Rat(isqrt(d))) : ExactScalar(1, 0, {{{Sym::SqrtDisc, d.get_si()}, 1}});
    return gamma_product(1) / (sq * ExactScalar(Rat(dual_index * dual_index)));
  }
  // [L*:L]^{3/2} with [L*:L] = p^2
  if (!is_square(dual_index)) throw usage_error("archimedean_density: dual index must be a square");
  Int r = isqrt(dual_index);
  return gamma_product(2) / ExactScalar(Rat(r * r * r));
}

inline Rat ramified_density(int rank, long p, int e = 0) {
  if (rank == 3) return 2 * Rat(p + 1) * (1 + Rat(1, p));
  if (rank != 4) throw usage_error("ramified_density: rank must be 3 or 4");
  if (e < 2 || e % 2) throw usage_error("ramified_density: e must be even and at least 2");
  return 4 * rpow(Rat(p), e / 2) * Rat(p + 1) * Rat(p + 1);
}

// --- local Siegel series factors -----------------------------------------------

struct LocalFactor {
  long q = 0;
  std::string method;
  std::string datum;
  SiegelPoly F;
  Rat value;
};

// F_q^T at q: unimodular shortcut, EGK chain at odd q with xi != 0, else the primitive reduction
inline LocalFactor local_F(const HalfIntMat& T, long q, const Budget& budget = {}, Reading reading = Reading::Corrected) {
  auto inv = local_invariants(T, q);
  LocalFactor L;
  L.q = q;
  int g = T.size();
  if (inv.e == 0 && (g % 2 == 0)) {
    L.method = "unimodular";
    L.F = SiegelPoly::from_poly(q, g, 0, Poly::constant(1));
  } else if (q != 2 && (g % 2 == 1 || inv.xi != 0)) {
    auto H = egk_odd(T, q);
    L.method = "egk";
    L.datum = H.str();
    L.F = F_from_egk(H, q, reading);
  } else {
    try {
      L.method = "reduction";
      L.F = reduction_F(T, q, budget);
    } catch (const budget_exceeded& ex) {
      throw unsupported_error("local factor at q=" + std::to_string(q) + " is out of reach: " + ex.what());
    }
  }
  L.value = F_eval(L.F, Rat(1, q * q));
  return L;
}

// companion ternary datum: EGK' at every q | D_T (q odd), (0,0,0;1,1,1) at a 2-unimodular prime
struct Companion {
  long p = 0;
  std::map<long, EGKDatum> local;
  std::string str() const {
    std::string s;
    for (auto& [q, H] : local) s += (s.empty() ? "" : " ") + std::to_string(q) + ":" + H.str();
    return s;
  }
};

inline Companion companion_of(const HalfIntMat& T, long p) {
  if (T.size() != 4) throw usage_error("companion_of: size 4 required");
  Companion C;
  C.p = p;
  for (long q : prime_divisors(T.det2T())) {
    if (q == 2) throw unsupported_error("companion datum at q=2 requires the 2-adic EGK construction");
    C.local[q] = egk_truncate(egk_odd(T, q));
  }
  if (!C.local.count(p)) throw usage_error("companion_of: p does not divide det(2T)");
  return C;
}

struct ProductReport {
  ExactScalar d_inf;
  Rat power_of_two;
  Rat ramified;
  ExactScalar unramified;  // 1/zeta(2)^2 with the p-Euler factor removed
  std::vector<LocalFactor> factors;
  Rat value;
};

inline void check_genus(const HalfIntMat& T, long p) {
  if (!T.positive_definite()) throw usage_error("positive definite input required");
  auto inv = local_invariants(T, p);
  if (!inv.chi_trivial) throw usage_error("the character of T must be trivial");
  if (diff_set(T) != std::vector<long>{p}) throw usage_error("Diff(T) must equal {" + std::to_string(p) + "}");
}

inline ExactScalar unramified_regularization(long p) {
  // prod_{q != p} (1 - q^-2)^2 = zeta(2)^-2 (1 - p^-2)^-2, zeta(2) = pi^2/6
  Rat e = 1 - Rat(1, p * p);
  return ExactScalar(Rat(36) / (e * e), -4, {});
}

// R'(O_p, T) / m'(O_p) for quaternary T
inline ProductReport siegel_product_quaternary(const HalfIntMat& T, long p, const Budget& budget = {}) {
  if (T.size() != 4) throw usage_error("siegel_product_quaternary: size 4 required");
  check_genus(T, p);
  auto G = build_maximal_order(p);
  ProductReport R;
  R.d_inf = archimedean_density(4, T, G.dual_index);
  R.power_of_two = Rat(8);
  R.ramified = ramified_density(4, p, local_invariants(T, p).e) / 2;
  R.unramified = unramified_regularization(p);
  Rat loc = 1;
  for (long q : prime_divisors(T.det2T())) {
    if (q == p) continue;
    R.factors.push_back(local_F(T, q, budget));
    loc *= R.factors.back().value;
  }
  ExactScalar v = R.d_inf * ExactScalar(R.power_of_two * R.ramified * loc) * R.unramified;
  if (!v.is_rational()) throw identity_failure("siegel_product_quaternary: transcendental factors did not cancel: " + v.str());
  R.value = v.coeff();
  return R;
}

inline ProductReport ternary_product(long p, std::vector<LocalFactor> factors) {
  auto G = build_maximal_order(p);
  ProductReport R;
  R.d_inf = archimedean_density(3, HalfIntMat::diag({1, 1, 1}), G.dual_index);
  R.power_of_two = Rat(4);
  R.ramified = ramified_density(3, p);
  R.unramified = unramified_regularization(p);
  Rat loc = 1;
  for (auto& L : factors) loc *= L.value;
  R.factors = std::move(factors);
  ExactScalar v = R.d_inf * ExactScalar(R.power_of_two * R.ramified * loc) * R.unramified;
  if (!v.is_rational()) throw identity_failure("siegel_product_ternary: transcendental factors did not cancel: " + v.str());
  R.value = v.coeff();
  return R;
}

// R'(O_p, T') / m'(O_p) for the ternary companion datum
inline ProductReport siegel_product_ternary(const Companion& C, Reading reading = Reading::Corrected) {
  std::vector<LocalFactor> fs;
  for (auto& [q, H] : C.local) {
    if (q == C.p) continue;
    LocalFactor L;
    L.q = q;
    L.method = "egk";
    L.datum = H.str();
    L.F = ternary_F(H, q, reading, true);
    L.value = F_eval(L.F, Rat(1, q * q));
    fs.push_back(L);
  }
  return ternary_product(C.p, fs);
}

// the same for an explicit positive definite ternary B with Diff(B) = {p}
inline ProductReport siegel_product_ternary(const HalfIntMat& B, long p, const Budget& budget = {},
                                            Reading reading = Reading::Corrected) {
  if (B.size() != 3 || !B.positive_definite()) throw usage_error("siegel_product_ternary: positive definite ternary input required");
  if (diff_set(B) != std::vector<long>{p}) throw usage_error("Diff(B) must equal {" + std::to_string(p) + "}");
  std::vector<LocalFactor> fs;
  for (long q : prime_divisors(B.det2T()))
    if (q != p) fs.push_back(local_F(B, q, budget, reading));
  return ternary_product(p, fs);
}

// m'(O_p) = 1 / (R'/m')(S_p), since R'(O_p, S_p) = 1
inline Rat mass_maximal_order(long p) {
  auto G = build_maximal_order(p);
  return 1 / siegel_product_quaternary(G.gram, p).value;
}

inline Rat mass_full(long p) { return 2 * mass_maximal_order(p); }

// R(O_p, .) = 2 m' (R'/m')
inline Rat rep_average(const HalfIntMat& T, long p, const Budget& budget = {}) {
  return 2 * mass_maximal_order(p) * siegel_product_quaternary(T, p, budget).value;
}

inline Rat rep_average(const Companion& C, Reading reading = Reading::Corrected) {
  return 2 * mass_maximal_order(C.p) * siegel_product_ternary(C, reading).value;
}

inline Rat rep_average_ternary(const HalfIntMat& B, long p, const Budget& budget = {}) {
  return 2 * mass_maximal_order(p) * siegel_product_ternary(B, p, budget).value;
}

}  // namespace siegel
