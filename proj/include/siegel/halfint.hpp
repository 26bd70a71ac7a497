#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"

namespace siegel {

// T stored through B = 2T (integral, symmetric, even diagonal)
class HalfIntMat {
 public:
  HalfIntMat() = default;
  explicit HalfIntMat(std::vector<std::vector<long long>> B) : g_(static_cast<int>(B.size())), B_(std::move(B)) { validate(); }

  static HalfIntMat diag(const std::vector<long long>& t) {
    std::vector<std::vector<long long>> B(t.size(), std::vector<long long>(t.size(), 0));
    for (size_t i = 0; i < t.size(); ++i) B[i][i] = 2 * t[i];
    return HalfIntMat(B);
  }

  int size() const { return g_; }
  long long b(int i, int j) const { return B_[i][j]; }
  const std::vector<std::vector<long long>>& B() const { return B_; }

  Rat t(int i, int j) const {
    Rat r(to_int(B_[i][j]), Int(2));
    r.canonicalize();
    return r;
  }

  Int det2T() const { return det_int(B_); }

  // D_T = (-4)^[g/2] det T
  Int disc() const {
    Rat d = Rat(det2T()) / Rat(ipow(2, g_));
    d *= rpow(Rat(-4), g_ / 2);
    d.canonicalize();
    if (d.get_den() != 1) throw std::logic_error("D_T not integral");
    return d.get_num();
  }

  bool positive_definite() const {
    for (int k = 1; k <= g_; ++k) {
      std::vector<std::vector<long long>> M(k, std::vector<long long>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M[i][j] = B_[i][j];
      if (det_int(M) <= 0) return false;
    }
    return true;
  }

  HalfIntMat leading(int k) const {
    std::vector<std::vector<long long>> M(k, std::vector<long long>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) M[i][j] = B_[i][j];
    return HalfIntMat(M);
  }

  // T[U] = U^t T U for an integral U (g x n)
  HalfIntMat transform(const std::vector<std::vector<long long>>& U) const {
    int n = static_cast<int>(U[0].size());
    std::vector<std::vector<long long>> R(n, std::vector<long long>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        long long s = 0;
        for (int i = 0; i < g_; ++i)
          for (int j = 0; j < g_; ++j) s += U[i][a] * B_[i][j] * U[j][c];
        R[a][c] = s;
      }
    return HalfIntMat(R);
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < g_; ++i) {
      os << (i ? "," : "") << "[";
      for (int j = 0; j < g_; ++j) os << (j ? "," : "") << B_[i][j];
      os << "]";
    }
    os << "]";
    return os.str();
  }

  friend bool operator==(const HalfIntMat& a, const HalfIntMat& b) { return a.B_ == b.B_; }

  static Int det_int(const std::vector<std::vector<long long>>& A) {
    int n = static_cast<int>(A.size());
    if (n == 0) return 1;
    std::vector<std::vector<Int>> M(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M[i][j] = to_int(A[i][j]);
    // Bareiss
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (M[k][k] == 0) {
        int r = k + 1;
        while (r < n && M[r][k] == 0) ++r;
        if (r == n) return 0;
        std::swap(M[k], M[r]);
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i)
        for (int j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
      prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
  }

 private:
  int g_ = 0;
  std::vector<std::vector<long long>> B_;

  void validate() const {
    for (int i = 0; i < g_; ++i) {
      if (static_cast<int>(B_[i].size()) != g_) throw usage_error("matrix is not square");
      if (B_[i][i] % 2 != 0) throw usage_error("diagonal entry (" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ") of 2T is odd; half-integral matrices need an even diagonal in 2T");
      for (int j = 0; j < g_; ++j)
        if (B_[i][j] != B_[j][i]) throw usage_error("2T is not symmetric at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  }
};

}  // namespace siegel
