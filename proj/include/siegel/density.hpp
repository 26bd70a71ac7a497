#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>
#include <vector>

#include "gksiegel.hpp"

namespace siegel {

struct Budget {
  double max_ops = 1e9;
  int jobs = 1;
  void check(const std::string& what, double cost) const {
    if (cost > max_ops) throw budget_exceeded(what, cost);
  }
};

namespace detail {

inline long long mulmod(long long a, long long b, long long N) {
  return static_cast<long long>((static_cast<__int128>(a) * b) % N);
}

inline long long posmod(long long a, long long N) {
  a %= N;
  return a < 0 ? a + N : a;
}

inline int vp_capped(long long x, long p, int cap) {
  if (x == 0) return cap;
  int k = 0;
  while (x % p == 0 && k < cap) {
    x /= p;
    ++k;
  }
  return k;
}

inline long long inv_mod(long long a, long long N) {
  long long g = N, x = 0, x1 = 1, r = posmod(a, N);
  while (r) {
    long long q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("inv_mod: not invertible");
  return posmod(x, N);
}

inline long long rat_mod(const Rat& x, long long N) {
  Int n = x.get_num() % Int(static_cast<long>(N));
  Int d = x.get_den() % Int(static_cast<long>(N));
  return mulmod(posmod(n.get_si(), N), inv_mod(d.get_si(), N), N);
}

// Bucketed character data: key (nu exponent, ord of the trace capped at the level)
using Buckets = std::map<std::pair<int, int>, Int>;

// sum over nu-classes of the character: weight 1 at trace 0, -1/(p-1) at ord level-1
inline std::map<int, Rat> character_sums(const Buckets& b, long p, int level) {
  std::map<int, Rat> out;
  for (auto& [key, cnt] : b) {
    auto [nu, v] = key;
    if (v == level)
      out[nu] += Rat(cnt);
    else if (v == level - 1)
      out[nu] -= Rat(cnt) / Rat(p - 1);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// sum of K - b_j over the Smith valuations b_j of a symmetric n x n (n <= 4) matrix mod p^K
inline int nu_small(long long (*A)[4], int n, long p, int K, long long N, const long long* pw) {
  auto mm = [N](long long x, long long y) { return N < (1LL << 31) ? (x * y) % N : mulmod(x, y, N); };
  int nu = 0;
  for (int s = 0; s < n; ++s) {
    int best = K, bi = s, bj = s;
    for (int i = s; i < n && best; ++i)
      for (int j = s; j < n; ++j) {
        long long x = A[i][j];
        if (!x) continue;
        int v = 0;
        if (p == 2) {
          v = std::min(best, __builtin_ctzll(static_cast<unsigned long long>(x)));
        } else {
          while (v < best && x % p == 0) {
            x /= p;
            ++v;
          }
        }
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (!v) break;
        }
      }
    if (best >= K) return nu;
    nu += K - best;
    if (bi != s)
      for (int c = 0; c < n; ++c) std::swap(A[s][c], A[bi][c]);
    if (bj != s)
      for (int r = 0; r < n; ++r) std::swap(A[r][s], A[r][bj]);
    long long pv = pw[best];
    long long uinv = inv_mod(A[s][s] / pv, N);
    for (int r = s + 1; r < n; ++r) {
      long long f = mm(A[r][s] / pv, uinv);
      if (!f) continue;
      for (int c = s; c < n; ++c) A[r][c] = posmod(A[r][c] - mm(f, A[s][c]), N);
    }
    for (int c = s + 1; c < n; ++c) {
      long long f = mm(A[s][c] / pv, uinv);
      if (!f) continue;
      for (int r = s; r < n; ++r) A[r][c] = posmod(A[r][c] - mm(f, A[r][s]), N);
    }
  }
  return nu;
}

struct SymLayout {
  int n = 0, d = 0;
  long long N = 0, total = 0;
  std::vector<std::pair<int, int>> idx;
  SymLayout(int n_, long p, int K) : n(n_) {
    N = ipow(p, K).get_si();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) idx.push_back({i, j});
    d = static_cast<int>(idx.size());
    total = 1;
    for (int k = 0; k < d; ++k) total *= N;
  }
};

// nu for every Z in Sym_n(Z/p^K), in enumeration order; shared by all T
inline std::shared_ptr<const std::vector<uint8_t>> nu_table(int n, long p, int K, int jobs) {
  static std::mutex mu;
  static std::map<std::tuple<int, long, int>, std::shared_ptr<const std::vector<uint8_t>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, p, K});
    if (it != cache.end()) return it->second;
  }
  SymLayout L(n, p, K);
  auto table = std::make_shared<std::vector<uint8_t>>(L.total);
  std::vector<long long> pw(K + 1, 1);
  for (int k = 1; k <= K; ++k) pw[k] = pw[k - 1] * p;
  jobs = std::max(1, jobs);
  auto work = [&](int w) {
    long long A[4][4];
    for (long long id = w; id < L.total; id += jobs) {
      long long r = id;
      for (int k = 0; k < L.d; ++k) {
        auto [i, j] = L.idx[k];
        A[i][j] = A[j][i] = r % L.N;
        r /= L.N;
      }
      (*table)[id] = static_cast<uint8_t>(nu_small(A, n, p, K, L.N, pw.data()));
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> th;
    for (int w = 0; w < jobs; ++w) th.emplace_back(work, w);
    for (auto& t : th) t.join();
  }
  std::lock_guard<std::mutex> lock(mu);
  // keep the cache bounded: at most 64M entries in total
  size_t held = 0;
  for (auto& [k, v] : cache) held += v->size();
  if (held + table->size() <= (size_t(1) << 26)) cache[{n, p, K}] = table;
  return table;
}

// all Z in Sym_n(Z/p^K): buckets by (sum of K - b_j, ord tr(TZ))
inline Buckets enumerate_sym(const HalfIntMat& T, long p, int K, int jobs) {
  int n = T.size();
  if (n > 4) throw usage_error("enumerate_sym: size at most 4");
  SymLayout L(n, p, K);
  std::vector<long long> coef(L.d);
  for (int k = 0; k < L.d; ++k) {
    auto [i, j] = L.idx[k];
    coef[k] = posmod(i == j ? T.b(i, i) / 2 : T.b(i, j), L.N);
  }
  auto nu = nu_table(n, p, K, jobs);
  int width = K + 1;
  std::vector<long long> counts(static_cast<size_t>(n * K + 1) * width, 0);
  // odometer over the coordinates with the trace kept incrementally
  std::vector<long long> x(L.d, 0);
  long long tr = 0;
  for (long long id = 0; id < L.total; ++id) {
    counts[(*nu)[id] * width + vp_capped(tr, p, K)] += 1;
    for (int k = 0; k < L.d; ++k) {
      tr += coef[k];
      if (++x[k] < L.N) break;
      x[k] = 0;
    }
    tr = posmod(tr, L.N);
  }
  Buckets out;
  for (int a = 0; a <= n * K; ++a)
    for (int v = 0; v <= K; ++v)
      if (counts[a * width + v]) out[{a, v}] = Int(static_cast<long>(counts[a * width + v]));
  return out;
}

}  // namespace detail

// --- congruence counts ------------------------------------------------------

// #{X mod p^i : S[X] - T in p^i * (half-integral)}
inline Int count_solutions(const HalfIntMat& S, const HalfIntMat& T, long p, int i, const Budget& budget = {}) {
  if (i < 0) throw usage_error("count_solutions: level must be nonnegative");
  int m = S.size(), n = T.size();
  if (i == 0) return 1;
  long long N = ipow(p, i).get_si();
  double cost = std::pow(static_cast<double>(N), m) + std::pow(static_cast<double>(N), (m - 1) * std::max(1, n));
  budget.check("count_solutions", cost);
  auto Q = [&](const std::vector<long long>& v) {
    long long s = 0;
    for (int a = 0; a < m; ++a) {
      s = (s + detail::mulmod(detail::posmod(S.b(a, a) / 2, N), detail::mulmod(v[a], v[a], N), N)) % N;
      for (int b = a + 1; b < m; ++b) s = (s + detail::mulmod(detail::posmod(S.b(a, b), N), detail::mulmod(v[a], v[b], N), N)) % N;
    }
    return s;
  };
  auto form = [&](const std::vector<long long>& v) {
    std::vector<long long> u(m, 0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) u[a] = (u[a] + detail::mulmod(detail::posmod(S.b(a, b), N), v[b], N)) % N;
    return u;
  };
  // vectors by value of Q
  std::map<long long, std::vector<std::vector<long long>>> byQ;
  std::vector<long long> target(n);
  for (int j = 0; j < n; ++j) target[j] = detail::posmod(T.b(j, j) / 2, N);
  std::vector<long long> v(m, 0);
  long long tot = 1;
  for (int a = 0; a < m; ++a) tot *= N;
  for (long long id = 0; id < tot; ++id) {
    long long r = id;
    for (int a = 0; a < m; ++a) {
      v[a] = r % N;
      r /= N;
    }
    long long q = Q(v);
    for (int j = 0; j < n; ++j)
      if (q == target[j]) {
        byQ[q].push_back(v);
        break;
      }
  }
  auto& sol0 = byQ[target[0]];
  std::vector<std::vector<std::vector<long long>>*> sol(n);
  for (int j = 0; j < n; ++j) sol[j] = &byQ[target[j]];

  // column recursion with the forms of the chosen columns as state
  std::function<Int(int, std::vector<std::vector<long long>>&, std::map<std::vector<long long>, Int>&)> rec;
  rec = [&](int j, std::vector<std::vector<long long>>& forms, std::map<std::vector<long long>, Int>& memo) -> Int {
    if (j == n) return 1;
    std::vector<long long> key;
    if (j == n - 1) {
      for (auto& f : forms) key.insert(key.end(), f.begin(), f.end());
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    Int c = 0;
    for (auto& w : *sol[j]) {
      bool ok = true;
      for (int k = 0; k < j && ok; ++k) {
        long long s = 0;
        for (int a = 0; a < m; ++a) s = (s + detail::mulmod(forms[k][a], w[a], N)) % N;
        if (s != detail::posmod(T.b(k, j), N)) ok = false;
      }
      if (!ok) continue;
      forms.push_back(form(w));
      c += rec(j + 1, forms, memo);
      forms.pop_back();
    }
    if (j == n - 1) memo[key] = c;
    return c;
  };

  int jobs = std::max(1, budget.jobs);
  std::vector<Int> part(jobs, 0);
  auto work = [&](int w) {
    std::map<std::vector<long long>, Int> memo;
    std::vector<std::vector<long long>> forms;
    for (size_t s = w; s < sol0.size(); s += jobs) {
      forms.assign(1, form(sol0[s]));
      part[w] += rec(1, forms, memo);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> th;
    for (int w = 0; w < jobs; ++w) th.emplace_back(work, w);
    for (auto& t : th) t.join();
  }
  Int total = 0;
  for (auto& x : part) total += x;
  return total;
}

// H^k with 2H = [[0,1],[1,0]]
inline HalfIntMat hyperbolic(int k) {
  std::vector<std::vector<long long>> B(2 * k, std::vector<long long>(2 * k, 0));
  for (int i = 0; i < k; ++i) B[2 * i][2 * i + 1] = B[2 * i + 1][2 * i] = 1;
  return HalfIntMat(B);
}

// normalized count p^{i(n(n+1)/2 - mn)} A_i(H^k, T) for several k at once, from the
// character-sum identity; exact for every level i
inline std::map<int, Rat> hyperbolic_normalized(const HalfIntMat& T, long p, int i, const std::vector<int>& ks,
                                                const Budget& budget = {}) {
  int n = T.size();
  budget.check("hyperbolic_normalized", std::pow(static_cast<double>(p), static_cast<double>(i) * n * (n + 1) / 2));
  auto sums = detail::character_sums(detail::enumerate_sym(T, p, i, budget.jobs), p, i);
  std::map<int, Rat> out;
  for (int k : ks) {
    Rat v = 0;
    for (auto& [nu, s] : sums) v += s * rpow(Rat(p), -static_cast<long>(nu) * k);
    out[k] = v;
  }
  return out;
}

inline Int count_solutions_hyperbolic(int k, const HalfIntMat& T, long p, int i, const Budget& budget = {}) {
  int n = T.size();
  Rat v = hyperbolic_normalized(T, p, i, {k}, budget)[k] * rpow(Rat(p), static_cast<long>(i) * (2L * k * n - n * (n + 1) / 2));
  if (v.get_den() != 1) throw identity_failure("count_solutions_hyperbolic: non-integral count");
  return v.get_num();
}

namespace detail {
// binary T ~ diag[t1,t2] over Z_p: contribution of Z with exact denominator p^j, per sample k
inline std::map<int, Rat> binary_layer(const Rat& t1, const Rat& t2, long p, int j) {
  long long N = ipow(p, j).get_si();
  long long a1 = rat_mod(t1, N), a2 = rat_mod(t2, N);
  // H[c][s]: number of z12 with min(j, ord(c - z12^2)) = s, split by z12 unit or not
  std::vector<std::vector<long long>> Hall(N, std::vector<long long>(j + 1, 0)), Hunit = Hall;
  for (long long z = 0; z < N; ++z) {
    long long z2 = mulmod(z, z, N);
    bool unit = z % p != 0;
    for (long long c = 0; c < N; ++c) {
      int s = vp_capped(posmod(c - z2, N), p, j);
      ++Hall[c][s];
      if (unit) ++Hunit[c][s];
    }
  }
  Buckets b;
  std::vector<std::vector<long long>> acc(j + 1, std::vector<long long>(j + 1, 0));
  for (long long x = 0; x < N; ++x)
    for (long long y = 0; y < N; ++y) {
      long long c = mulmod(x, y, N);
      long long r = (mulmod(a1, x, N) + mulmod(a2, y, N)) % N;
      int v = vp_capped(r, p, j);
      bool prim = (x % p) || (y % p);
      auto& H = prim ? Hall : Hunit;
      for (int s = 0; s <= j; ++s) acc[s][v] += H[c][s];
    }
  for (int s = 0; s <= j; ++s)
    for (int v = 0; v <= j; ++v)
      if (acc[s][v]) b[{2 * j - s, v}] += Int(static_cast<long>(acc[s][v]));
  return character_sums(b, p, j);
}

inline std::pair<Rat, Rat> binary_diagonal(const HalfIntMat& T, long p) {
  if (T.size() != 2) throw usage_error("binary_diagonal: size 2 expected");
  if (p != 2) {
    auto D = diagonalize_odd(T, p);
    return {D[0].t, D[1].t};
  }
  if (T.b(0, 1) != 0) throw unsupported_error("binary fast path at p = 2 needs a diagonal matrix");
  return {T.t(0, 0), T.t(1, 1)};
}
}  // namespace detail

struct DensityReport {
  HalfIntMat S, T;
  long p = 0;
  std::vector<std::pair<int, Int>> counts;
  std::vector<Rat> normalized;
  bool stable = false;
  Rat value() const { return normalized.empty() ? Rat(0) : normalized.back(); }
};

inline DensityReport local_density(const HalfIntMat& S, const HalfIntMat& T, long p, const Budget& budget = {}, int max_level = 12) {
  if (S.det2T() == 0 || T.det2T() == 0) throw usage_error("local_density: singular input");
  int m = S.size(), n = T.size();
  DensityReport R{S, T, p, {}, {}, false};
  int i0 = ord_p(T.det2T(), p) + 1;
  for (int i = i0; i <= max_level; ++i) {
    Int A = count_solutions(S, T, p, i, budget);
    R.counts.push_back({i, A});
    R.normalized.push_back(Rat(A) * rpow(Rat(p), static_cast<long>(i) * (n * (n + 1) / 2 - m * n)));
    size_t k = R.normalized.size();
    if (k >= 2 && R.normalized[k - 1] == R.normalized[k - 2]) {
      R.stable = true;
      return R;
    }
  }
  throw unsupported_error("local_density: no stabilization up to level " + std::to_string(max_level));
}

// alpha_p(H^k, T) for several k, by levels until two consecutive levels agree
inline std::map<int, Rat> hyperbolic_density(const HalfIntMat& T, long p, const std::vector<int>& ks, const Budget& budget = {},
                                             int max_level = 12) {
  int i0 = ord_p(T.det2T(), p) + 1;
  bool fast = T.size() == 2 && (p != 2 || T.b(0, 1) == 0);
  if (fast) {
    auto [t1, t2] = detail::binary_diagonal(T, p);
    std::map<int, Rat> acc;
    for (int k : ks) acc[k] = 1;
    for (int j = 1; j <= max_level; ++j) {
      double N = std::pow(static_cast<double>(p), j);
      budget.check("hyperbolic_density", 2 * N * N);
      auto layer = detail::binary_layer(t1, t2, p, j);
      bool zero = true;
      for (int k : ks) {
        Rat add = 0;
        for (auto& [nu, s] : layer) add += s * rpow(Rat(p), -static_cast<long>(nu) * k);
        if (add != 0) zero = false;
        acc[k] += add;
      }
      if (j > i0 && zero) return acc;
    }
    throw unsupported_error("hyperbolic_density: no stabilization");
  }
  std::map<int, Rat> prev;
  for (int i = i0; i <= max_level; ++i) {
    auto cur = hyperbolic_normalized(T, p, i, ks, budget);
    if (i > i0 && cur == prev) return cur;
    prev = cur;
  }
  throw unsupported_error("hyperbolic_density: no stabilization");
}

// F from samples beta(T, p^{-k}) = alpha_p(H^k, T), k = g/2+1, ..., g/2+1+e
inline SiegelPoly interpolate_F(const HalfIntMat& T, long p, const Budget& budget = {}) {
  int g = T.size();
  if (g % 2) throw usage_error("interpolate_F: even size required");
  auto inv = local_invariants(T, p);
  int e = inv.e;
  std::vector<int> ks;
  for (int r = 0; r <= e; ++r) ks.push_back(g / 2 + 1 + r);
  auto beta = hyperbolic_density(T, p, ks, budget);
  auto gam = gamma_factor(g, p, inv.xi);
  int n = e + 1;
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n + 1));
  for (int r = 0; r < n; ++r) {
    Rat x = rpow(Rat(p), -ks[r]);
    Rat gx = gam.eval(x);
    if (gx == 0) throw std::logic_error("interpolate_F: gamma vanishes at a sample point");
    Rat xp = 1;
    for (int c = 0; c < n; ++c, xp *= x) A[r][c] = xp;
    A[r][n] = beta[ks[r]] / gx;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw std::logic_error("interpolate_F: singular Vandermonde system");
    std::swap(A[c], A[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Rat f = A[r][c] / A[c][c];
      for (int k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<Rat> coef(n);
  for (int c = 0; c < n; ++c) coef[c] = A[c][n] / A[c][c];
  Poly P(coef);
  if (!P.integral()) throw identity_failure("interpolate_F: non-integral coefficients");
  if (P[0] != 1) throw identity_failure("interpolate_F: constant term differs from 1");
  return SiegelPoly::from_poly(p, g, e, P);
}

// --- reduction to primitive densities ------------------------------------------

namespace detail {
// #{X in M_{2k,n}(F_p) of rank n : H^k[X] = T mod p}, column by column: the number of admissible
// next columns depends only on the Gram data of T, by a Gauss sum over the hyperbolic space
inline Int primitive_count_hyperbolic(const HalfIntMat& T, long p, int k) {
  int n = T.size();
  auto md = [p](long long x) { return static_cast<long>(((x % p) + p) % p); };
  std::vector<long> q(n);
  std::vector<std::vector<long>> b(n, std::vector<long>(n));
  for (int i = 0; i < n; ++i) {
    q[i] = md(T.b(i, i) / 2);
    for (int j = 0; j < n; ++j) b[i][j] = md(T.b(i, j));
  }
  auto quad = [&](const std::vector<long>& c, int r) {
    long long v = 0;
    for (int i = 0; i < r; ++i) {
      v += c[i] * c[i] % p * q[i];
      for (int l = i + 1; l < r; ++l) v += c[i] * c[l] % p * b[i][l];
    }
    return md(v);
  };
  std::vector<long> inv(p, 0);
  for (long t = 1; t < p; ++t)
    for (long u = 1; u < p; ++u)
      if (t * u % p == 1) inv[t] = u;
  Int total = 1;
  Int pk = ipow(p, k), p2k = pk * pk;
  for (int j = 0; j < n; ++j) {
    std::vector<long long> cnt(p, 0);
    long long inspan = 0;
    std::vector<long> s(j, 0);
    long long combos = 1;
    for (int i = 0; i < j; ++i) combos *= p;
    for (long long id = 0; id < combos; ++id) {
      long long r = id;
      for (int i = 0; i < j; ++i) {
        s[i] = r % p;
        r /= p;
      }
      long Qz = quad(s, j);
      long long sb = 0;
      bool match = Qz == q[j];
      for (int l = 0; l < j; ++l) {
        sb += s[l] * b[l][j];
        long long bl = 0;
        for (int i = 0; i < j; ++i) bl += s[i] * b[i][l];
        if (md(bl) != b[l][j]) match = false;
      }
      if (match) ++inspan;
      for (long t = 1; t < p; ++t) cnt[md(-t * q[j] - sb - inv[t] * Qz)]++;
    }
    for (long r = 2; r < p; ++r)
      if (cnt[r] != cnt[1]) throw std::logic_error("primitive_count_hyperbolic: irrational character sum");
    // the nonzero residues share one count, so the sum of roots of unity is cnt0 - cnt1
    Int gauss = Int(static_cast<long>(cnt[0])) - Int(static_cast<long>(cnt[1]));
    Int num = p2k + pk * gauss;
    Int pj = ipow(p, j + 1);
    if (num % pj != 0) throw std::logic_error("primitive_count_hyperbolic: non-integral count");
    Int step = num / pj - Int(static_cast<long>(inspan));
    if (step <= 0) return 0;
    total *= step;
  }
  return total;
}

// T[G^{-1}] for G in Hermite normal form with det G = p^nu, kept when half-integral over Z_p.
// G is upper triangular, so the leading c x c block of T[G^{-1}] only sees the first c columns:
// columns are chosen left to right and a failing block prunes the branch
inline std::vector<std::pair<int, HalfIntMat>> superlattices(const HalfIntMat& T, long p, const Budget& budget) {
  int n = T.size();
  int numax = ord_p(T.det2T(), p) / 2;
  std::vector<std::pair<int, HalfIntMat>> out;
  std::vector<std::vector<long long>> G(n, std::vector<long long>(n, 0));
  std::vector<std::vector<Rat>> Gi(n, std::vector<Rat>(n, 0));
  // W[c] = (2T) * column c of G^{-1}
  std::vector<std::vector<Rat>> W(n, std::vector<Rat>(n, 0));
  std::vector<std::vector<long long>> Bp(n, std::vector<long long>(n, 0));
  double visited = 0;
  std::function<void(int, int)> column = [&](int c, int nu) {
    if (c == n) {
      out.push_back({nu, HalfIntMat(Bp)});
      return;
    }
    for (int d = 0; nu + d <= numax; ++d) {
      long long pd = ipow(p, d).get_si();
      G[c][c] = pd;
      long long combos = 1;
      for (int r = 0; r < c; ++r) combos *= pd;
      for (long long id = 0; id < combos; ++id) {
        visited += n * n;
        budget.check("superlattices", visited);
        long long rr = id;
        for (int r = 0; r < c; ++r) {
          G[r][c] = rr % pd;
          rr /= pd;
        }
        Gi[c][c] = Rat(1) / Rat(to_int(pd));
        for (int r = c - 1; r >= 0; --r) {
          Rat v = 0;
          for (int l = r + 1; l <= c; ++l)
            if (G[r][l]) v -= Rat(to_int(G[r][l])) * Gi[l][c];
          Gi[r][c] = v / Rat(to_int(G[r][r]));
        }
        for (int a = 0; a < n; ++a) {
          Rat v = 0;
          for (int b = 0; b <= c; ++b)
            if (Gi[b][c] != 0) v += Rat(to_int(T.b(a, b))) * Gi[b][c];
          W[c][a] = v;
        }
        bool ok = true;
        for (int i = 0; i <= c && ok; ++i) {
          Rat v = 0;
          for (int a = 0; a <= i; ++a)
            if (Gi[a][i] != 0) v += Gi[a][i] * W[c][a];
          v.canonicalize();
          if (v.get_den() != 1 || (i == c && v.get_num() % 2 != 0)) {
            ok = false;
            break;
          }
          if (!v.get_num().fits_slong_p()) throw unsupported_error("superlattices: entry overflow");
          Bp[i][c] = Bp[c][i] = v.get_num().get_si();
        }
        if (ok) column(c + 1, nu + d);
      }
      for (int r = 0; r < c; ++r) G[r][c] = 0;
    }
  };
  column(0, 0);
  return out;
}
}  // namespace detail

// alpha_p(H^k, T) = sum over superlattices of p^{nu(n+1-2k)} times the level-one primitive density
inline std::map<int, Rat> hyperbolic_density_reduction(const HalfIntMat& T, long p, const std::vector<int>& ks, const Budget& budget = {}) {
  if (T.det2T() == 0) throw usage_error("hyperbolic_density_reduction: singular input");
  int n = T.size();
  auto sup = detail::superlattices(T, p, budget);
  std::map<int, Rat> out;
  for (int k : ks) {
    Rat v = 0;
    for (auto& [nu, Tg] : sup) {
      Int N = detail::primitive_count_hyperbolic(Tg, p, k);
      if (N == 0) continue;
      v += Rat(N) * rpow(Rat(p), static_cast<long>(nu) * (n + 1 - 2 * k) + n * (n + 1) / 2 - 2L * k * n);
    }
    out[k] = v;
  }
  return out;
}

namespace detail {
inline SiegelPoly interpolate_samples(const HalfIntMat& T, long p, int e, int xi, const std::vector<int>& ks,
                                      const std::map<int, Rat>& beta) {
  int g = T.size();
  auto gam = gamma_factor(g, p, xi);
  int n = e + 1;
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n + 1));
  for (int r = 0; r < n; ++r) {
    Rat x = rpow(Rat(p), -ks[r]);
    Rat gx = gam.eval(x);
    if (gx == 0) throw std::logic_error("interpolate_F: gamma vanishes at a sample point");
    Rat xp = 1;
    for (int c = 0; c < n; ++c, xp *= x) A[r][c] = xp;
    A[r][n] = beta.at(ks[r]) / gx;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw std::logic_error("interpolate_F: singular Vandermonde system");
    std::swap(A[c], A[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Rat f = A[r][c] / A[c][c];
      for (int k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<Rat> coef(n);
  for (int c = 0; c < n; ++c) coef[c] = A[c][n] / A[c][c];
  Poly P(coef);
  if (!P.integral()) throw identity_failure("interpolate_F: non-integral coefficients");
  if (P[0] != 1) throw identity_failure("interpolate_F: constant term differs from 1");
  return SiegelPoly::from_poly(p, g, e, P);
}
}  // namespace detail

// F from exact samples alpha_p(H^k, T) obtained through the primitive reduction; any size, any p
inline SiegelPoly reduction_F(const HalfIntMat& T, long p, const Budget& budget = {}) {
  int g = T.size();
  auto inv = local_invariants(T, p);
  int e = inv.e;
  std::vector<int> ks;
  // one extra sample confirms the degree
  for (int r = 0; r <= e + 1; ++r) ks.push_back(g / 2 + 1 + r);
  auto beta = hyperbolic_density_reduction(T, p, ks, budget);
  int xi = g % 2 ? 1 : inv.xi;
  auto F = detail::interpolate_samples(T, p, e, xi, std::vector<int>(ks.begin(), ks.end() - 1), beta);
  Rat x = rpow(Rat(p), -ks.back());
  if (gamma_factor(g, p, xi).eval(x) * F_eval(F, x) != beta.at(ks.back()))
    throw identity_failure("reduction_F: the extra sample disagrees with the degree-e interpolant");
  return F;
}

// c_0..c_K of the Siegel series truncated at denominators p^K
inline std::vector<Int> series_truncated(const HalfIntMat& T, long p, int K, const Budget& budget = {}) {
  int g = T.size();
  if (K < 0) throw usage_error("series_truncated: K must be nonnegative");
  if (K == 0) return {Int(1)};
  budget.check("series_truncated", std::pow(static_cast<double>(p), static_cast<double>(K) * g * (g + 1) / 2));
  auto sums = detail::character_sums(detail::enumerate_sym(T, p, K, budget.jobs), p, K);
  std::vector<Int> c(K + 1, 0);
  for (auto& [nu, s] : sums) {
    if (nu > K) continue;
    if (s.get_den() != 1) throw identity_failure("series_truncated: non-integral coefficient");
    c[nu] = s.get_num();
  }
  return c;
}

// F from the series c / gamma; uses one extra degree to confirm the polynomial ends at e
inline SiegelPoly series_F(const HalfIntMat& T, long p, const Budget& budget = {}) {
  int g = T.size();
  auto inv = local_invariants(T, p);
  int e = inv.e;
  auto gam = gamma_factor(g, p, g % 2 ? 1 : inv.xi);
  double cost = [&](int K) { return std::pow(static_cast<double>(p), static_cast<double>(K) * g * (g + 1) / 2); }(e + 1);
  int K = cost <= budget.max_ops ? e + 1 : e;
  auto c = series_truncated(T, p, K, budget);
  std::vector<Rat> num(c.begin(), c.end());
  // F = c * den / num(gamma)
  auto lhs = Poly(num) * gam.den;
  auto F = Poly::series_div(lhs, gam.num, K);
  if (K == e + 1 && F[e + 1] != 0) throw identity_failure("series_F: nonzero coefficient beyond degree e");
  F.resize(e + 1);
  Poly P(F);
  if (!P.integral() || P[0] != 1) throw identity_failure("series_F: result is not an integral polynomial with F(0)=1");
  return SiegelPoly::from_poly(p, g, e, P);
}

}  // namespace siegel
