#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace siegel {

using Int = mpz_class;
using Rat = mpq_class;

// error taxonomy shared by the library and the CLI exit codes
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct budget_exceeded : unsupported_error {
  double estimate;
  budget_exceeded(const std::string& what, double est)
      : unsupported_error(what + " (estimated ops " + std::to_string(est) + ")"), estimate(est) {}
};

struct identity_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int to_int(long long v) { return Int(static_cast<long>(v)); }

inline Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Int ipow(long b, unsigned long e) { return ipow(Int(b), e); }

inline Rat rpow(const Rat& b, long e) {
  if (e >= 0) {
    Rat r(ipow(b.get_num(), static_cast<unsigned long>(e)), ipow(b.get_den(), static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
  }
  if (b == 0) throw std::domain_error("rpow: zero to a negative power");
  Rat r(ipow(b.get_den(), static_cast<unsigned long>(-e)), ipow(b.get_num(), static_cast<unsigned long>(-e)));
  r.canonicalize();
  return r;
}

inline Rat rpow(long b, long e) { return rpow(Rat(b), e); }

inline int ord_p(Int n, long p) {
  if (n == 0) throw std::domain_error("ord_p of zero");
  int k = 0;
  Int r;
  while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
    ++k;
  }
  return k;
}

inline int ord_p(const Rat& x, long p) { return ord_p(x.get_num(), p) - ord_p(x.get_den(), p); }

inline Int strip_p(Int n, long p) {
  while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)))
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
  return n;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::pair<Int, int>> factorize(Int n) {
  std::vector<std::pair<Int, int>> out;
  if (n < 0) n = -n;
  if (n == 0) throw std::domain_error("factorize zero");
  for (Int d = 2; d * d <= n; ++d) {
    if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
      int k = 0;
      while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
        n /= d;
        ++k;
      }
      out.emplace_back(d, k);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<long> prime_divisors(const Int& n) {
  std::vector<long> ps;
  for (auto& [q, k] : factorize(n)) ps.push_back(q.get_si());
  return ps;
}

inline bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// squarefree part with sign
inline Int squarefree_part(const Int& n) {
  Int s = n < 0 ? Int(-1) : Int(1);
  for (auto& [q, k] : factorize(n))
    if (k % 2) s *= q;
  return s;
}

inline int kronecker(const Int& a, const Int& n) {
  if (n == 0) throw std::domain_error("kronecker: n = 0");
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline int kronecker(long a, long n) { return kronecker(Int(a), Int(n)); }

inline int legendre_unit(const Rat& u, long p) {
  // u a p-adic unit given as a rational with p-free numerator and denominator
  return kronecker(u.get_num() * u.get_den(), Int(p));
}

inline std::string to_string(const Rat& x) { return x.get_str(); }
inline std::string to_string(const Int& x) { return x.get_str(); }

inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw usage_error("malformed rational '" + s + "'");
  r.canonicalize();
  return r;
}

inline Rat abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

}  // namespace siegel
