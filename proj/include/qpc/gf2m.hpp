#pragma once

// GF(2^m) arithmetic, m <= 8, via exp/log tables over a fixed primitive
// modulus per m so that all derived codebooks are reproducible byte for byte.

#include <cstdint>
#include <vector>

#include "qpc/errors.hpp"

namespace qpc {

class Gf2m {
 public:
  explicit Gf2m(int m) : m_(m) {
    if (m < 1 || m > 8) throw ConfigError("GF(2^m) supports m in [1,8]");
    q_ = 1 << m;
    // Primitive moduli: x+1, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1,
    // x^6+x+1, x^7+x^3+1, x^8+x^4+x^3+x^2+1.
    static constexpr int kModulus[9] = {0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D};
    mod_ = kModulus[m];
    exp_.assign(static_cast<std::size_t>(q_ - 1), 0);
    log_.assign(static_cast<std::size_t>(q_), -1);
    int v = 1;
    for (int i = 0; i < q_ - 1; ++i) {
      exp_[i] = v;
      if (log_[v] != -1) throw InternalError("modulus is not primitive");
      log_[v] = i;
      v = mul_slow(v, 2);
    }
    if (v != 1) throw InternalError("multiplicative order mismatch");
  }

  int m() const { return m_; }
  int q() const { return q_; }
  int alpha() const { return exp_[1 % (q_ - 1)]; }

  static int add(int a, int b) { return a ^ b; }

  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }

  int inv(int a) const {
    if (a == 0) throw ConfigError("inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  int div(int a, int b) const { return mul(a, inv(b)); }

  /// alpha^i for any integer i (negative allowed).
  int alpha_pow(long long i) const {
    const int ord = q_ - 1;
    long long r = i % ord;
    if (r < 0) r += ord;
    return exp_[static_cast<std::size_t>(r)];
  }

  int log(int a) const {
    if (a == 0) throw ConfigError("log of zero");
    return log_[a];
  }

 private:
  int mul_slow(int a, int b) const {
    int r = 0;
    while (b) {
      if (b & 1) r ^= a;
      b >>= 1;
      a <<= 1;
      if (a & q_) a ^= mod_;
    }
    return r;
  }

  int m_, q_, mod_;
  std::vector<int> exp_;
  std::vector<int> log_;
};

}  // namespace qpc
