#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace siegel {

using Real = boost::multiprecision::cpp_bin_float_quad;

enum class Sym { LogPrime = 0, SqrtDisc = 1, LogUnit = 2, ClassH = 3 };

struct Symbol {
  Sym kind;
  long arg;
  bool operator<(const Symbol& o) const { return std::tie(kind, arg) < std::tie(o.kind, o.arg); }
  bool operator==(const Symbol& o) const { return kind == o.kind && arg == o.arg; }

  std::string key() const {
    static const char* names[] = {"logp", "sqrt", "logeps", "h"};
    return std::string(names[static_cast<int>(kind)]) + ":" + std::to_string(arg);
  }
  static Symbol from_key(const std::string& k) {
    auto c = k.find(':');
    if (c == std::string::npos) throw usage_error("bad symbol key " + k);
    std::string n = k.substr(0, c);
    long a = std::stol(k.substr(c + 1));
    if (n == "logp") return {Sym::LogPrime, a};
    if (n == "sqrt") return {Sym::SqrtDisc, a};
    if (n == "logeps") return {Sym::LogUnit, a};
    if (n == "h") return {Sym::ClassH, a};
    throw usage_error("bad symbol key " + k);
  }
};

// rational * pi^k * product of formal symbols
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(const Rat& c) : coeff_(c) { normalize(); }
  ExactScalar(long c) : coeff_(c) {}
  ExactScalar(const Rat& c, int pi, std::map<Symbol, int> f) : coeff_(c), pi_(pi), factors_(std::move(f)) {
    normalize();
  }

  static ExactScalar log_prime(long p) { return ExactScalar(1, 0, {{{Sym::LogPrime, p}, 1}}); }
  static ExactScalar sqrt_disc(long d) { return ExactScalar(1, 0, {{{Sym::SqrtDisc, d}, 1}}); }
  static ExactScalar log_unit(long d) { return ExactScalar(1, 0, {{{Sym::LogUnit, d}, 1}}); }
  static ExactScalar class_h(long d) { return ExactScalar(1, 0, {{{Sym::ClassH, d}, 1}}); }
  static ExactScalar pi(int k = 1) { return ExactScalar(1, k, {}); }

  const Rat& coeff() const { return coeff_; }
  int pi_exp() const { return pi_; }
  const std::map<Symbol, int>& factors() const { return factors_; }
  bool is_zero() const { return coeff_ == 0; }
  bool is_rational() const { return pi_ == 0 && factors_.empty(); }

  bool same_monomial(const ExactScalar& o) const { return pi_ == o.pi_ && factors_ == o.factors_; }

  ExactScalar& operator*=(const ExactScalar& o) {
    if (is_zero() || o.is_zero()) return *this = ExactScalar();
    coeff_ *= o.coeff_;
    pi_ += o.pi_;
    for (auto& [s, k] : o.factors_) factors_[s] += k;
    normalize();
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o) { return *this *= o.inverse(); }

  ExactScalar inverse() const {
    if (is_zero()) throw std::domain_error("ExactScalar: division by zero");
    ExactScalar r;
    r.coeff_ = 1 / coeff_;
    r.pi_ = -pi_;
    for (auto& [s, k] : factors_) r.factors_[s] = -k;
    r.normalize();
    return r;
  }

  ExactScalar pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    ExactScalar r(1);
    for (int i = 0; i < k; ++i) r *= *this;
    return r;
  }

  ExactScalar& operator+=(const ExactScalar& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (!same_monomial(o)) throw std::domain_error("ExactScalar: sum of unlike monomials");
    coeff_ += o.coeff_;
    normalize();
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) { return *this += -o; }
  ExactScalar operator-() const {
    ExactScalar r = *this;
    r.coeff_ = -r.coeff_;
    return r;
  }

  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.coeff_ == b.coeff_ && a.pi_ == b.pi_ && a.factors_ == b.factors_;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  std::string str() const {
    std::string s = coeff_.get_str();
    if (pi_) s += "*pi^" + std::to_string(pi_);
    for (auto& [sym, k] : factors_) s += "*" + sym.key() + "^" + std::to_string(k);
    return s;
  }

  Real numeric() const;

 private:
  Rat coeff_{0};
  int pi_ = 0;
  std::map<Symbol, int> factors_;

  void normalize() {
    coeff_.canonicalize();
    if (coeff_ == 0) {
      pi_ = 0;
      factors_.clear();
      return;
    }
    for (auto it = factors_.begin(); it != factors_.end();) {
      if (it->first.kind == Sym::SqrtDisc && it->second != 0) {
        // keep sqrt exponents in {-1, 0}
        int k = it->second;
        int fold = (k % 2 == 0) ? k / 2 : (k + 1) / 2;
        coeff_ *= rpow(Rat(it->first.arg), fold);
        it->second = k - 2 * fold;
      }
      if (it->second == 0)
        it = factors_.erase(it);
      else
        ++it;
    }
  }
};

// Bernoulli numbers B_0..B_n, B_1 = -1/2
inline std::vector<Rat> bernoulli_numbers(int n) {
  std::vector<Rat> B(n + 1);
  B[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rat s = 0;
    Int binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      s += binom * B[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    B[m] = -s / (m + 1);
  }
  return B;
}

inline Rat zeta_negative_odd(int i) {
  if (i < 1) throw usage_error("zeta_negative_odd: i must be >= 1");
  auto B = bernoulli_numbers(2 * i);
  return -B[2 * i] / (2 * i);
}

inline Rat zeta_zero() { return Rat(-1, 2); }

inline bool is_fundamental_discriminant(const Int& d) {
  if (d == 1 || d == 0) return false;
  Int r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree_part(d) == d;
  if (r == 0) {
    Int m = d / 4;
    Int mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && squarefree_part(m) == m;
  }
  return false;
}

inline Int fundamental_discriminant(const Int& D) {
  if (D == 0) throw std::domain_error("fundamental_discriminant of zero");
  Int s = squarefree_part(D);
  Int r = ((s % 4) + 4) % 4;
  return r == 1 ? s : Int(4 * s);
}

struct UnitData {
  Int t, u;  // eps = (t + u sqrt d)/2
  int norm;
};

// fundamental unit of the maximal order of discriminant d > 0 via continued fractions
inline UnitData fundamental_unit(const Int& d) {
  if (!is_fundamental_discriminant(d) || d < 0) throw usage_error("fundamental_unit: d=" + d.get_str() + " is not a positive fundamental discriminant");
  bool even = (d % 4 == 0);
  Int D = even ? Int(d / 4) : d;
  Int P = even ? 0 : 1, Q = even ? 1 : 2;
  Int s = isqrt(D);
  Int p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  for (int it = 0; it < 1000000; ++it) {
    if (Q <= 0) throw std::logic_error("fundamental_unit: non-positive CF denominator");
    Int a;
    mpz_fdiv_q(a.get_mpz_t(), Int(P + s).get_mpz_t(), Q.get_mpz_t());
    Int pk = a * p1 + p2, qk = a * q1 + q2;
    p2 = p1; p1 = pk; q2 = q1; q1 = qk;
    Int N = even ? Int(pk * pk - D * qk * qk) : Int(pk * pk - pk * qk - (D - 1) / 4 * qk * qk);
    if (N == 1 || N == -1) {
      if (even) return {2 * pk, qk, static_cast<int>(N.get_si())};
      return {2 * pk - qk, qk, static_cast<int>(N.get_si())};
    }
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw std::logic_error("fundamental_unit: no unit found");
}

inline std::pair<Int, Int> pell_fundamental(const Int& d) {
  if (d <= 0 || is_square(d) || !is_fundamental_discriminant(d))
    throw usage_error("pell_fundamental: d=" + d.get_str() + " must be a positive nonsquare fundamental discriminant");
  auto e = fundamental_unit(d);
  if (e.norm == 1) return {e.t, e.u};
  return {(e.t * e.t + d * e.u * e.u) / 2, e.t * e.u};
}

// narrow and wide class numbers from cycles of reduced indefinite forms
struct ClassNumber {
  long narrow;
  long wide;
};

inline ClassNumber class_number(const Int& d) {
  if (!is_fundamental_discriminant(d) || d < 0) throw usage_error("class_number: positive fundamental discriminant expected");
  Int s = isqrt(d);
  auto reduced = [&](const Int& a, const Int& b) {
    Int A = 2 * (a < 0 ? Int(-a) : a);
    Int lo = A + b;
    if (lo * lo <= d) return false;
    Int hi = A - b;
    return hi < 0 || hi * hi < d;
  };
  std::set<std::tuple<Int, Int, Int>> forms;
  for (Int b = (d % 2 == 0) ? 2 : 1; b <= s; b += 2) {
    Int ac = (b * b - d) / 4;
    Int m = -ac;
    for (Int a = 1; a <= m; ++a) {
      if (m % a != 0) continue;
      for (int sg : {1, -1}) {
        Int A = sg * a, C = ac / A;
        if (reduced(A, b)) forms.insert({A, b, C});
      }
    }
  }
  std::set<std::tuple<Int, Int, Int>> seen;
  long cycles = 0;
  for (auto& f : forms) {
    if (seen.count(f)) continue;
    ++cycles;
    auto cur = f;
    do {
      seen.insert(cur);
      auto [a, b, c] = cur;
      Int twoc = 2 * (c < 0 ? Int(-c) : c);
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), Int(s + b).get_mpz_t(), twoc.get_mpz_t());
      Int bn = s - r;
      Int an = (bn * bn - d) / (4 * c);
      cur = {c, bn, an};
      if (!forms.count(cur)) throw std::logic_error("class_number: reduction cycle left the reduced set");
    } while (cur != f);
  }
  auto e = fundamental_unit(d);
  return {cycles, e.norm == -1 ? cycles : cycles / 2};
}

inline ExactScalar L_one(const Int& d) {
  if (d <= 1 || !is_fundamental_discriminant(d)) throw usage_error("L_one: d must be a fundamental discriminant > 1");
  long dl = d.get_si();
  return ExactScalar(2, 0, {{{Sym::ClassH, dl}, 1}, {{Sym::LogUnit, dl}, 1}, {{Sym::SqrtDisc, dl}, -1}});
}

// sqrt(d)*h/log(eps), kept only for comparison against the classical value
inline ExactScalar L_one_alternative(const Int& d) {
  long dl = d.get_si();
  return ExactScalar(1, 0, {{{Sym::ClassH, dl}, 1}, {{Sym::LogUnit, dl}, -1}, {{Sym::SqrtDisc, dl}, 1}});
}

inline Real L_one_partial_sum(long d, long N) {
  Real s = 0;
  for (long n = 1; n <= N; ++n) {
    int k = kronecker(Int(d), Int(n));
    if (k) s += Real(k) / n;
  }
  return s;
}

inline Real ExactScalar::numeric() const {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  Real v = Real(coeff_.get_num().get_str()) / Real(coeff_.get_den().get_str());
  if (pi_) v *= pow(boost::math::constants::pi<Real>(), pi_);
  for (auto& [s, k] : factors_) {
    Real x;
    switch (s.kind) {
      case Sym::LogPrime: x = log(Real(s.arg)); break;
      case Sym::SqrtDisc: x = sqrt(Real(s.arg)); break;
      case Sym::LogUnit: {
        auto e = fundamental_unit(Int(s.arg));
        x = log((Real(e.t.get_str()) + Real(e.u.get_str()) * sqrt(Real(s.arg))) / 2);
        break;
      }
      case Sym::ClassH: x = Real(class_number(Int(s.arg)).wide); break;
    }
    v *= pow(x, k);
  }
  return v;
}

}  // namespace siegel
