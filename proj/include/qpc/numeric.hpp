#pragma once

// Dual numeric backend for probability computations: exact rationals
// (arbitrary precision) and plain doubles with compensated summation.
// All library algorithms are templated on the scalar type S, with
// num_traits<S> supplying the few backend-specific operations.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "qpc/errors.hpp"

namespace qpc {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Float backend scalar. A thin wrapper so that overload resolution and
/// traits can distinguish it from incidental doubles.
struct Flt {
  double v = 0.0;
  Flt() = default;
  explicit Flt(double x) : v(x) {}

  Flt operator-() const { return Flt{-v}; }
  Flt& operator+=(const Flt& o) { v += o.v; return *this; }
  Flt& operator-=(const Flt& o) { v -= o.v; return *this; }
  Flt& operator*=(const Flt& o) { v *= o.v; return *this; }
  Flt& operator/=(const Flt& o) { v /= o.v; return *this; }

  friend Flt operator+(Flt a, const Flt& b) { return a += b; }
  friend Flt operator-(Flt a, const Flt& b) { return a -= b; }
  friend Flt operator*(Flt a, const Flt& b) { return a *= b; }
  friend Flt operator/(Flt a, const Flt& b) { return a /= b; }
  friend bool operator==(const Flt& a, const Flt& b) { return a.v == b.v; }
  friend bool operator!=(const Flt& a, const Flt& b) { return a.v != b.v; }
  friend bool operator<(const Flt& a, const Flt& b) { return a.v < b.v; }
  friend bool operator>(const Flt& a, const Flt& b) { return a.v > b.v; }
  friend bool operator<=(const Flt& a, const Flt& b) { return a.v <= b.v; }
  friend bool operator>=(const Flt& a, const Flt& b) { return a.v >= b.v; }
};

template <class S>
struct num_traits;

template <>
struct num_traits<Rat> {
  static constexpr bool exact = true;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_int(long long k) { return Rat(k); }
  static Rat from_ratio(long long a, long long b) { return Rat(a) / Rat(b); }
  static Rat from_rat(const Rat& r) { return r; }
  static double to_double(const Rat& r) { return r.convert_to<double>(); }
  // Ratio levels are grouped by exact equality.
  static bool same_level(const Rat& a, const Rat& b) { return a == b; }
};

template <>
struct num_traits<Flt> {
  static constexpr bool exact = false;
  static Flt zero() { return Flt{0.0}; }
  static Flt one() { return Flt{1.0}; }
  static Flt from_int(long long k) { return Flt{static_cast<double>(k)}; }
  static Flt from_ratio(long long a, long long b) {
    return Flt{static_cast<double>(a) / static_cast<double>(b)};
  }
  static Flt from_rat(const Rat& r) { return Flt{r.convert_to<double>()}; }
  static double to_double(const Flt& f) { return f.v; }
  // Ratio levels within relative 1e-9 are merged; float noise must not
  // split a randomization level.
  static bool same_level(const Flt& a, const Flt& b) {
    double m = std::max(std::fabs(a.v), std::fabs(b.v));
    return std::fabs(a.v - b.v) <= 1e-9 * m;
  }
};

/// Accumulator with compensated (Kahan) summation in float mode and a plain
/// exact sum in rational mode.
template <class S>
class Accum {
 public:
  void add(const S& x) { sum_ += x; }
  const S& total() const { return sum_; }

 private:
  S sum_ = num_traits<S>::zero();
};

template <>
class Accum<Flt> {
 public:
  void add(const Flt& x) {
    double y = x.v - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  Flt total() const { return Flt{s_}; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Extended ratio value: a finite scalar or the distinguished top level +inf
/// (likelihood mass on outputs the auxiliary distribution assigns zero to).
template <class S>
struct ExtRatio {
  bool inf = false;
  S v = num_traits<S>::zero();

  static ExtRatio infinity() { return ExtRatio{true, num_traits<S>::zero()}; }
  static ExtRatio finite(S x) { return ExtRatio{false, std::move(x)}; }
  static ExtRatio zero() { return finite(num_traits<S>::zero()); }

  friend bool operator==(const ExtRatio& a, const ExtRatio& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.v == b.v;
  }
  friend bool operator!=(const ExtRatio& a, const ExtRatio& b) { return !(a == b); }
  friend bool operator<(const ExtRatio& a, const ExtRatio& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.v < b.v;
  }
  friend bool operator>(const ExtRatio& a, const ExtRatio& b) { return b < a; }
  friend bool operator<=(const ExtRatio& a, const ExtRatio& b) { return !(b < a); }
  friend bool operator>=(const ExtRatio& a, const ExtRatio& b) { return !(a < b); }
};

/// Likelihood-over-auxiliary ratio with the zero-denominator convention:
/// q > 0 -> w/q; w = q = 0 -> 0; w > 0, q = 0 -> +inf.
template <class S>
ExtRatio<S> ratio_of(const S& w, const S& q) {
  const S z = num_traits<S>::zero();
  if (q > z) return ExtRatio<S>::finite(w / q);
  if (w > z) return ExtRatio<S>::infinity();
  return ExtRatio<S>::zero();
}

/// x^e with the 0^0 = 1 convention (exponents are small non-negative ints).
template <class S>
S pow_nat(const S& x, unsigned e) {
  S r = num_traits<S>::one();
  for (unsigned i = 0; i < e; ++i) r *= x;
  return r;
}

inline BigInt pow_bigint(const BigInt& b, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// b^e in uint64, `ok=false` on overflow.
inline std::uint64_t checked_pow_u64(std::uint64_t b, unsigned e, bool* ok) {
  *ok = true;
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) {
      *ok = false;
      return 0;
    }
    r *= b;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Parsing

/// True if `s` uses the a/b fraction syntax (which selects the rational
/// backend in file ingestion).
inline bool fraction_syntax(const std::string& s) {
  return s.find('/') != std::string::npos;
}

/// Parse "a/b" or a plain decimal string into an exact rational.
inline Rat parse_rat(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ConfigError("empty numeric literal");

  auto parse_int = [](const std::string& t) -> BigInt {
    if (t.empty()) throw ConfigError("empty integer literal");
    std::size_t i = 0;
    bool neg = false;
    if (t[0] == '+' || t[0] == '-') {
      neg = t[0] == '-';
      i = 1;
    }
    if (i == t.size()) throw ConfigError("bad integer literal '" + t + "'");
    BigInt v = 0;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw ConfigError("bad integer literal '" + t + "'");
      v = v * 10 + (t[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + text + "'");
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(parse_int(s));
  std::string head = s.substr(0, dot);
  std::string tail = s.substr(dot + 1);
  bool neg = !head.empty() && head[0] == '-';
  if (!head.empty() && (head[0] == '+' || head[0] == '-')) head = head.substr(1);
  if (head.empty()) head = "0";
  if (tail.empty()) tail = "0";
  BigInt ipart = parse_int(head);
  BigInt fpart = parse_int(tail);
  if (fpart < 0) throw ConfigError("bad decimal literal '" + text + "'");
  BigInt den = pow_bigint(10, static_cast<unsigned>(tail.size()));
  Rat r = Rat(ipart) + Rat(fpart, den);
  return neg ? Rat(-r) : r;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline BigInt pow10_big(int e) { return pow_bigint(10, static_cast<unsigned>(e)); }

}  // namespace detail

/// Deterministic decimal rendering of a rational to exactly 15 significant
/// digits (round half to even), fixed-point when the decimal exponent lies in
/// [-4, 14], scientific otherwise. Zero renders as "0".
inline std::string render_sig15(const Rat& r) {
  if (r == 0) return "0";
  const bool neg = r < 0;
  BigInt num = boost::multiprecision::numerator(r);
  if (neg) num = -num;
  const BigInt den = boost::multiprecision::denominator(r);

  // Decimal exponent k: largest k with 10^k <= |r|.
  int k = static_cast<int>(num.str().size()) - static_cast<int>(den.str().size());
  while (num * detail::pow10_big(std::max(0, -(k))) <
         den * detail::pow10_big(std::max(0, k)))
    --k;
  while (num * detail::pow10_big(std::max(0, -(k + 1))) >=
         den * detail::pow10_big(std::max(0, k + 1)))
    ++k;

  // 15-digit significand D with |r| ~= D * 10^(k-14), half-to-even rounding.
  BigInt n_scaled, d_scaled;
  if (14 - k >= 0) {
    n_scaled = num * detail::pow10_big(14 - k);
    d_scaled = den;
  } else {
    n_scaled = num;
    d_scaled = den * detail::pow10_big(k - 14);
  }
  BigInt digits = n_scaled / d_scaled;
  const BigInt rem = n_scaled - digits * d_scaled;
  const BigInt twice = rem * 2;
  if (twice > d_scaled || (twice == d_scaled && (digits & 1) == 1)) ++digits;
  if (digits == detail::pow10_big(15)) {
    digits /= 10;
    ++k;
  }

  std::string ds = digits.str();  // exactly 15 digits
  std::string out;
  if (neg) out.push_back('-');
  if (k >= 0 && k <= 14) {
    out += ds.substr(0, static_cast<std::size_t>(k) + 1);
    if (k < 14) {
      out.push_back('.');
      out += ds.substr(static_cast<std::size_t>(k) + 1);
    }
  } else if (k < 0 && k >= -4) {
    out += "0.";
    out.append(static_cast<std::size_t>(-k - 1), '0');
    out += ds;
  } else {
    out.push_back(ds[0]);
    out.push_back('.');
    out += ds.substr(1);
    out.push_back('e');
    out.push_back(k < 0 ? '-' : '+');
    int ae = std::abs(k);
    if (ae < 10) out.push_back('0');
    out += std::to_string(ae);
  }
  return out;
}

/// Shortest round-trip rendering of a double (deterministic).
inline std::string render_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <class S>
std::string render_scalar(const S& s);

template <>
inline std::string render_scalar<Rat>(const Rat& r) {
  return render_sig15(r);
}

template <>
inline std::string render_scalar<Flt>(const Flt& f) {
  return render_double(f.v);
}

template <class S>
std::string render_ext_ratio(const ExtRatio<S>& r) {
  return r.inf ? "inf" : render_scalar<S>(r.v);
}

}  // namespace qpc
