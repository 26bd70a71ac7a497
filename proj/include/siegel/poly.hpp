#pragma once

#include <map>
#include <vector>

#include "arith.hpp"

namespace siegel {

// dense polynomial with rational coefficients, c[k] is the coefficient of X^k
struct Poly {
  std::vector<Rat> c;

  Poly() = default;
  Poly(std::vector<Rat> v) : c(std::move(v)) { trim(); }
  static Poly constant(const Rat& a) { return Poly(std::vector<Rat>{a}); }
  static Poly monomial(const Rat& a, int k) {
    std::vector<Rat> v(k + 1, Rat(0));
    v[k] = a;
    return Poly(v);
  }

  int degree() const { return c.empty() ? -1 : static_cast<int>(c.size()) - 1; }
  Rat operator[](int k) const { return (k >= 0 && k < static_cast<int>(c.size())) ? c[k] : Rat(0); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  Rat eval(const Rat& x) const {
    Rat r = 0;
    for (int k = degree(); k >= 0; --k) r = r * x + c[k];
    return r;
  }

  Poly deriv() const {
    std::vector<Rat> v;
    for (int k = 1; k <= degree(); ++k) v.push_back(c[k] * k);
    return Poly(v);
  }

  // P(a X)
  Poly scale(const Rat& a) const {
    Poly r = *this;
    Rat m = 1;
    for (auto& x : r.c) {
      x *= m;
      m *= a;
    }
    r.trim();
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rat> v(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
    return Poly(v);
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + b * Rat(-1); }
  friend Poly operator*(const Poly& a, const Rat& s) {
    Poly r = a;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c.empty() || b.c.empty()) return Poly();
    std::vector<Rat> v(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    return Poly(v);
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }

  bool integral() const {
    for (auto& x : c)
      if (x.get_den() != 1) return false;
    return true;
  }

  // first n+1 coefficients of num/den as a power series (den[0] != 0)
  static std::vector<Rat> series_div(const Poly& num, const Poly& den, int n) {
    std::vector<Rat> q(n + 1, Rat(0));
    for (int k = 0; k <= n; ++k) {
      Rat s = num[k];
      for (int j = 1; j <= k; ++j) s -= den[j] * q[k - j];
      q[k] = s / den[0];
    }
    return q;
  }
};

// x + y sqrt(q)
struct Surd {
  Rat x{0}, y{0};
  bool is_zero() const { return x == 0 && y == 0; }
  friend bool operator==(const Surd& a, const Surd& b) { return a.x == b.x && a.y == b.y; }
};

struct SurdField {
  long q;
  Surd add(const Surd& a, const Surd& b) const { return {a.x + b.x, a.y + b.y}; }
  Surd sub(const Surd& a, const Surd& b) const { return {a.x - b.x, a.y - b.y}; }
  Surd mul(const Surd& a, const Surd& b) const { return {a.x * b.x + q * a.y * b.y, a.x * b.y + a.y * b.x}; }
  Surd scal(const Surd& a, const Rat& s) const { return {a.x * s, a.y * s}; }
  // q^{k/2}
  Surd halfpow(long k) const {
    if (k % 2 == 0) return {rpow(Rat(q), k / 2), 0};
    return {0, rpow(Rat(q), (k - 1) / 2)};
  }
};

// Laurent polynomial over Q(sqrt q)
using Laurent = std::map<int, Surd>;

inline void laurent_add(const SurdField& F, Laurent& L, int k, const Surd& v) {
  auto& s = L[k];
  s = F.add(s, v);
  if (s.is_zero()) L.erase(k);
}

}  // namespace siegel
