#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "exactnum.hpp"
#include "halfint.hpp"

namespace siegel {

namespace detail {
inline Int square_class_int(const Rat& a) { return a.get_num() * a.get_den(); }

inline int mod8(const Int& u) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), u.get_mpz_t(), 8);
  return static_cast<int>(r.get_si());
}
}  // namespace detail

// v = 0 stands for the real place
inline int hilbert_symbol(const Rat& a, const Rat& b, long v) {
  if (a == 0 || b == 0) throw std::domain_error("hilbert_symbol: zero argument");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  Int A = detail::square_class_int(a), Bn = detail::square_class_int(b);
  int al = ord_p(A, v), be = ord_p(Bn, v);
  Int u = strip_p(A, v), w = strip_p(Bn, v);
  if (v == 2) {
    int um = detail::mod8(u), wm = detail::mod8(w);
    int eu = ((um - 1) / 2) & 1, ew = ((wm - 1) / 2) & 1;
    int ou = ((um * um - 1) / 8) & 1, ow = ((wm * wm - 1) / 8) & 1;
    int e = (eu * ew + al * ow + be * ou) & 1;
    return e ? -1 : 1;
  }
  int s = 1;
  if ((al * be) % 2 && ((v - 1) / 2) % 2) s = -s;
  if (be % 2) s *= kronecker(u, Int(v));
  if (al % 2) s *= kronecker(w, Int(v));
  return s;
}

inline int hasse_invariant(const std::vector<Rat>& diag, long p) {
  int s = 1;
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) s *= hilbert_symbol(diag[i], diag[j], p);
  return s;
}

// orthogonal basis over Q
inline std::vector<Rat> diagonalize_rational(const HalfIntMat& T) {
  int g = T.size();
  std::vector<std::vector<Rat>> A(g, std::vector<Rat>(g));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) A[i][j] = T.t(i, j);
  std::vector<Rat> out;
  for (int k = 0; k < g; ++k) {
    int piv = -1;
    for (int i = k; i < g; ++i)
      if (A[i][i] != 0) { piv = i; break; }
    if (piv < 0) {
      int r = -1, c = -1;
      for (int i = k; i < g && r < 0; ++i)
        for (int j = i + 1; j < g; ++j)
          if (A[i][j] != 0) { r = i; c = j; break; }
      if (r < 0) throw std::domain_error("diagonalize_rational: singular form");
      // e_r <- e_r + e_c
      for (int j = 0; j < g; ++j) A[r][j] += A[c][j];
      for (int i = 0; i < g; ++i) A[i][r] += A[i][c];
      piv = r;
    }
    std::swap(A[k], A[piv]);
    for (auto& row : A) std::swap(row[k], row[piv]);
    for (int i = k + 1; i < g; ++i) {
      Rat m = A[i][k] / A[k][k];
      if (m == 0) continue;
      for (int j = k; j < g; ++j) A[i][j] -= m * A[k][j];
      for (int j = k; j < g; ++j) A[j][i] = A[i][j];
      A[i][k] = 0;
      A[k][i] = 0;
    }
    out.push_back(A[k][k]);
  }
  return out;
}

// normalized Hasse invariant of a nondegenerate diagonal form, compared against the
// reference form with the same dimension and determinant
inline int eta_of_diagonal(const std::vector<Rat>& diag, long p) {
  int m = static_cast<int>(diag.size());
  if (m <= 1) return 1;
  Rat d = 1;
  for (auto& x : diag) d *= x;
  std::vector<Rat> ref;
  if (m % 2) {
    int k = (m - 1) / 2;
    for (int i = 0; i < k; ++i) { ref.push_back(1); ref.push_back(-1); }
    ref.push_back((k % 2 ? -1 : 1) * d);
  } else {
    int k = m / 2;
    for (int i = 0; i < k - 1; ++i) { ref.push_back(1); ref.push_back(-1); }
    Rat delta = (k % 2 ? -1 : 1) * d;
    ref.push_back(1);
    ref.push_back(-delta);
  }
  return hasse_invariant(diag, p) * hasse_invariant(ref, p);
}

inline int eta(const HalfIntMat& T, long p) { return eta_of_diagonal(diagonalize_rational(T), p); }

// xi: 1 if D is a square in Q_p, -1 if an unramified nonsquare, 0 if ramified
inline int xi_of_disc(const Rat& D, long p) {
  Int df = fundamental_discriminant(detail::square_class_int(D));
  if (df == 1) return 1;
  return kronecker(df, Int(p));
}

inline Rat disc_of_diagonal(const std::vector<Rat>& diag) {
  Rat d = 1;
  for (auto& x : diag) d *= x;
  int m = static_cast<int>(diag.size());
  return d * rpow(Rat(-4), m / 2);
}

// per-prime record; chi_trivial refers to the global character of D_T
struct LocalInvariants {
  long p;
  Int D;
  int ord_D;
  int cond_ord;
  int e;
  int xi;
  int eta;
  bool chi_trivial;
  Int fund_disc;
};

inline LocalInvariants local_invariants(const HalfIntMat& T, long p) {
  if (!is_prime(p)) throw usage_error("local_invariants: p must be prime");
  Int D = T.disc();
  if (D == 0) throw usage_error("singular matrix");
  LocalInvariants L;
  L.p = p;
  L.D = D;
  L.ord_D = ord_p(D, p);
  L.fund_disc = fundamental_discriminant(D);
  L.cond_ord = L.fund_disc == 1 ? 0 : ord_p(L.fund_disc, p);
  L.e = (T.size() % 2 == 0) ? L.ord_D - L.cond_ord : L.ord_D;
  L.xi = L.fund_disc == 1 ? 1 : kronecker(L.fund_disc, Int(p));
  L.eta = eta(T, p);
  L.chi_trivial = (L.fund_disc == 1);
  return L;
}

struct DiagEntry {
  int unit_class;  // +1 residue, -1 nonresidue
  int a;
  Rat t;
};

inline std::vector<DiagEntry> diagonalize_odd(const HalfIntMat& T, long p) {
  if (p == 2) throw usage_error("diagonalize_odd: p = 2 is not supported");
  if (!is_prime(p)) throw usage_error("diagonalize_odd: p must be prime");
  if (T.det2T() == 0) throw usage_error("diagonalize_odd: singular matrix");
  int g = T.size();
  std::vector<std::vector<Rat>> A(g, std::vector<Rat>(g));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) A[i][j] = T.t(i, j);
  auto ordv = [&](const Rat& x) { return x == 0 ? 1 << 28 : ord_p(x, p); };
  std::vector<DiagEntry> out;
  for (int k = 0; k < g; ++k) {
    int bi = k, bj = k, best = 1 << 29;
    for (int i = k; i < g; ++i)
      for (int j = i; j < g; ++j) {
        int o = ordv(A[i][j]);
        if (o < best || (o == best && i == j && bi != bj)) { best = o; bi = i; bj = j; }
      }
    if (bi != bj) {
      for (int j = 0; j < g; ++j) A[bi][j] += A[bj][j];
      for (int i = 0; i < g; ++i) A[i][bi] += A[i][bj];
    }
    std::swap(A[k], A[bi]);
    for (auto& row : A) std::swap(row[k], row[bi]);
    for (int i = k + 1; i < g; ++i) {
      Rat m = A[i][k] / A[k][k];
      if (m == 0) continue;
      for (int j = k; j < g; ++j) A[i][j] -= m * A[k][j];
      for (int j = k; j < g; ++j) A[j][i] = A[i][j];
      A[i][k] = 0;
      A[k][i] = 0;
    }
    Rat t = A[k][k];
    int a = ord_p(t, p);
    Rat u = t / rpow(Rat(p), a);
    out.push_back({legendre_unit(u, p), a, t});
  }
  std::stable_sort(out.begin(), out.end(), [](const DiagEntry& x, const DiagEntry& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.unit_class > y.unit_class;
  });
  return out;
}

inline std::vector<long> diff_set(const HalfIntMat& T) {
  if (!T.positive_definite()) throw usage_error("diff_set: positive definite input required");
  std::vector<long> out;
  for (long q : prime_divisors(2 * T.det2T()))
    if (eta(T, q) == -1) out.push_back(q);
  return out;
}

inline bool coherence_check(int m, int d, const std::map<long, int>& etas) {
  long ex = (m % 2 == 0) ? static_cast<long>(d) * m * (m - 2) / 8 : static_cast<long>(d) * (static_cast<long>(m) * m - 1) / 8;
  int s = (ex % 2) ? -1 : 1;
  for (auto& [p, e] : etas) s *= e;
  return s == 1;
}

}  // namespace siegel
