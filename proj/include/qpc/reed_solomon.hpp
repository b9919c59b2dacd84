#pragma once

// Reed-Solomon evaluation codes over GF(2^m): codewords are the evaluations
// of all degree-<k polynomials at the points alpha^0..alpha^(n-1). For
// n < q-1 the code is the punctured full-length code, and the decoder treats
// the punctured tail as erasures, which preserves the bounded-distance
// guarantee 2*errors + erasures <= n-k.

#include <cstdint>
#include <optional>
#include <vector>

#include "qpc/codes.hpp"
#include "qpc/errors.hpp"
#include "qpc/gf2m.hpp"

namespace qpc {

class ReedSolomonCode {
 public:
  /// Symbol value marking an erased coordinate in a received word.
  int erased() const { return gf_.q(); }

  ReedSolomonCode(int m, int n, int k) : gf_(m), n_(n), k_(k) {
    if (k < 1 || n < k || n > gf_.q() - 1)
      throw ConfigError("Reed-Solomon needs 1 <= k <= n <= q-1");
    full_ = gf_.q() - 1;
  }

  int n() const { return n_; }
  int k() const { return k_; }
  int q() const { return gf_.q(); }
  int design_distance() const { return n_ - k_ + 1; }
  const Gf2m& field() const { return gf_; }

  std::uint64_t message_count() const {
    bool ok = false;
    std::uint64_t c = checked_pow_u64(static_cast<std::uint64_t>(gf_.q()),
                                      static_cast<unsigned>(k_), &ok);
    if (!ok) throw BudgetError("message count q^k overflows 64 bits");
    return c;
  }

  /// Message digits (base q, digit j = coefficient of x^j) of a message index.
  std::vector<int> message_digits(std::uint64_t index) const {
    std::vector<int> d(static_cast<std::size_t>(k_));
    for (int j = 0; j < k_; ++j) {
      d[j] = static_cast<int>(index % gf_.q());
      index /= gf_.q();
    }
    return d;
  }

  std::uint64_t message_index(const std::vector<int>& digits) const {
    std::uint64_t idx = 0;
    for (int j = k_; j-- > 0;) idx = idx * gf_.q() + static_cast<std::uint64_t>(digits[j]);
    return idx;
  }

  /// Evaluate the message polynomial at the n code points.
  std::vector<int> encode(const std::vector<int>& digits) const {
    if (digits.size() != static_cast<std::size_t>(k_))
      throw ConfigError("message must have k digits");
    std::vector<int> word(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) word[i] = eval_poly(digits, gf_.alpha_pow(i));
    return word;
  }

  std::vector<int> encode_index(std::uint64_t index) const {
    return encode(message_digits(index));
  }

  /// All q^k codewords in message-index order.
  Codebook codebook(std::uint64_t budget = kDefaultBudget) const {
    const std::uint64_t count = message_count();
    if (count > budget)
      throw BudgetError("materializing q^k = " + std::to_string(count) +
                        " codewords exceeds budget " + std::to_string(budget));
    std::vector<std::vector<std::uint8_t>> words(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      auto w = encode_index(i);
      words[i].assign(w.begin(), w.end());
    }
    return Codebook::from_words(n_, gf_.q(), std::move(words));
  }

  /// Bounded-distance errors-and-erasures decoding: any pattern with
  /// 2*errors + erasures <= n-k is corrected; otherwise either failure
  /// (nullopt) or a codeword within the same radius of the received word is
  /// returned, never anything else. Erasures carry the `erased()` marker.
  std::optional<std::vector<int>> bd_decode(const std::vector<int>& received) const {
    if (received.size() != static_cast<std::size_t>(n_))
      throw ConfigError("received word length differs from n");
    const int rho = full_ - k_;  // parity budget of the full-length code

    std::vector<int> filled(static_cast<std::size_t>(full_), 0);
    std::vector<int> eras;
    for (int i = 0; i < n_; ++i) {
      if (received[i] == erased()) {
        eras.push_back(i);
      } else if (received[i] < 0 || received[i] >= gf_.q()) {
        throw ConfigError("received symbol outside alphabet");
      } else {
        filled[i] = received[i];
      }
    }
    for (int i = n_; i < full_; ++i) eras.push_back(i);  // punctured tail
    const int e = static_cast<int>(eras.size());
    if (e > rho) return std::nullopt;

    // Syndromes S_j = r(alpha^j), j = 1..rho, as coefficients of S(x).
    std::vector<int> syn(static_cast<std::size_t>(rho), 0);
    for (int j = 1; j <= rho; ++j) {
      int s = 0;
      for (int i = 0; i < full_; ++i)
        if (filled[i]) s = Gf2m::add(s, gf_.mul(filled[i], gf_.alpha_pow(1ll * i * j)));
      syn[j - 1] = s;
    }

    // Erasure locator and the modified syndrome.
    std::vector<int> loc_e = {1};
    for (int i : eras) loc_e = poly_mul_trunc(loc_e, {1, gf_.alpha_pow(i)}, full_ + 1);
    std::vector<int> xi = poly_mul_trunc(syn, loc_e, rho);

    // Euclidean key-equation solver for the error locator.
    std::vector<int> sigma = {1};
    if (poly_deg(xi) >= 0) {
      std::vector<int> r_prev(static_cast<std::size_t>(rho) + 1, 0);
      r_prev[static_cast<std::size_t>(rho)] = 1;  // x^rho
      std::vector<int> r_cur = xi;
      std::vector<int> v_prev = {0};
      std::vector<int> v_cur = {1};
      while (2 * poly_deg(r_cur) >= rho + e) {
        auto [quot, rem] = poly_divmod(r_prev, r_cur);
        std::vector<int> v_next = poly_sub(v_prev, poly_mul_trunc(quot, v_cur, full_ + 1));
        r_prev = std::move(r_cur);
        r_cur = std::move(rem);
        v_prev = std::move(v_cur);
        v_cur = std::move(v_next);
        if (poly_deg(r_cur) < 0) break;
      }
      sigma = v_cur;
    }
    if (sigma.empty() || sigma[0] == 0) return std::nullopt;
    const int t_found = poly_deg(sigma);
    if (t_found < 0 || 2 * t_found + e > rho) return std::nullopt;

    // Combined locator, its roots, and the error values.
    std::vector<int> lambda = poly_mul_trunc(sigma, loc_e, full_ + 1);
    std::vector<int> omega = poly_mul_trunc(syn, lambda, rho);
    std::vector<int> lambda_d = poly_formal_derivative(lambda);

    std::vector<int> positions;
    for (int i = 0; i < full_; ++i) {
      const int xinv = gf_.alpha_pow(-i);
      if (eval_poly(lambda, xinv) == 0) positions.push_back(i);
    }
    if (static_cast<int>(positions.size()) != poly_deg(lambda)) return std::nullopt;

    std::vector<int> corrected = filled;
    for (int i : positions) {
      const int xinv = gf_.alpha_pow(-i);
      const int denom = eval_poly(lambda_d, xinv);
      if (denom == 0) return std::nullopt;
      const int value = gf_.div(eval_poly(omega, xinv), denom);
      corrected[i] = Gf2m::add(corrected[i], value);
    }

    // A genuine codeword or nothing.
    for (int j = 1; j <= rho; ++j) {
      int s = 0;
      for (int i = 0; i < full_; ++i)
        if (corrected[i]) s = Gf2m::add(s, gf_.mul(corrected[i], gf_.alpha_pow(1ll * i * j)));
      if (s != 0) return std::nullopt;
    }

    return interpolate_message(corrected);
  }

 private:
  int eval_poly(const std::vector<int>& p, int x) const {
    int acc = 0;
    for (std::size_t j = p.size(); j-- > 0;) acc = Gf2m::add(gf_.mul(acc, x), p[j]);
    return acc;
  }

  static int poly_deg(const std::vector<int>& p) {
    for (std::size_t j = p.size(); j-- > 0;)
      if (p[j] != 0) return static_cast<int>(j);
    return -1;
  }

  std::vector<int> poly_mul_trunc(const std::vector<int>& a, const std::vector<int>& b,
                                  int trunc) const {
    std::vector<int> out(std::min<std::size_t>(a.size() + b.size(), static_cast<std::size_t>(trunc)),
                         0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j)
        if (b[j] != 0) out[i + j] = Gf2m::add(out[i + j], gf_.mul(a[i], b[j]));
    }
    return out;
  }

  static std::vector<int> poly_sub(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      int av = i < a.size() ? a[i] : 0;
      int bv = i < b.size() ? b[i] : 0;
      out[i] = Gf2m::add(av, bv);
    }
    return out;
  }

  std::pair<std::vector<int>, std::vector<int>> poly_divmod(std::vector<int> num,
                                                            const std::vector<int>& den) const {
    const int dd = poly_deg(den);
    if (dd < 0) throw InternalError("polynomial division by zero");
    std::vector<int> quot(num.size(), 0);
    const int lead_inv = gf_.inv(den[static_cast<std::size_t>(dd)]);
    for (int dn = poly_deg(num); dn >= dd; dn = poly_deg(num)) {
      const int c = gf_.mul(num[static_cast<std::size_t>(dn)], lead_inv);
      const int shift = dn - dd;
      quot[static_cast<std::size_t>(shift)] = c;
      for (int j = 0; j <= dd; ++j)
        num[static_cast<std::size_t>(j + shift)] =
            Gf2m::add(num[static_cast<std::size_t>(j + shift)], gf_.mul(c, den[static_cast<std::size_t>(j)]));
    }
    return {std::move(quot), std::move(num)};
  }

  /// In characteristic 2 only the odd-degree terms survive.
  static std::vector<int> poly_formal_derivative(const std::vector<int>& p) {
    std::vector<int> out(p.size() > 1 ? p.size() - 1 : 1, 0);
    for (std::size_t j = 1; j < p.size(); j += 2) out[j - 1] = p[j];
    return out;
  }

  /// Recover message digits from a full-length codeword by Lagrange
  /// interpolation through the first k evaluation points.
  std::vector<int> interpolate_message(const std::vector<int>& word) const {
    std::vector<int> coeffs(static_cast<std::size_t>(k_), 0);
    for (int i = 0; i < k_; ++i) {
      if (word[i] == 0) continue;
      const int xi = gf_.alpha_pow(i);
      // Basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j).
      std::vector<int> basis = {1};
      int denom = 1;
      for (int j = 0; j < k_; ++j) {
        if (j == i) continue;
        const int xj = gf_.alpha_pow(j);
        basis = poly_mul_trunc(basis, {xj, 1}, k_);
        denom = gf_.mul(denom, Gf2m::add(xi, xj));
      }
      const int scale = gf_.div(word[i], denom);
      for (int j = 0; j < k_; ++j)
        coeffs[j] = Gf2m::add(coeffs[j], gf_.mul(scale, j < static_cast<int>(basis.size()) ? basis[j] : 0));
    }
    return coeffs;
  }

  Gf2m gf_;
  int n_, k_, full_;
};

}  // namespace qpc
