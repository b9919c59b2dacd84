#pragma once

// Discrete channel models: dense one-shot matrices, the q-ary erasure/error
// family, memoryless product extension, symmetry classification, and
// membership testing for the set of symmetry-preserving auxiliary output
// distributions.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "qpc/errors.hpp"
#include "qpc/numeric.hpp"

namespace qpc {

/// Parameters of the symmetric erasure/error channel: input alphabet size q,
/// flip mass eps spread uniformly over the q-1 wrong symbols, erasure mass
/// delta on the dedicated erasure symbol.
template <class S>
struct ErasureErrorParams {
  int q = 2;
  S eps = num_traits<S>::zero();
  S delta = num_traits<S>::zero();
  /// Whether the output alphabet carries the erasure symbol. The family
  /// constructor always sets it; the BSC convenience constructor does not.
  bool erasure_output = true;

  S keep() const { return num_traits<S>::one() - delta - eps; }
  S flip_each() const { return eps / num_traits<S>::from_int(q - 1); }

  void validate() const {
    const S zero = num_traits<S>::zero();
    const S one = num_traits<S>::one();
    if (q < 2) throw ConfigError("erasure/error channel needs q >= 2");
    if (eps < zero || eps >= one) throw ConfigError("eps must lie in [0,1)");
    if (delta < zero || delta >= one) throw ConfigError("delta must lie in [0,1)");
    if (delta + eps > one) throw ConfigError("delta + eps must not exceed 1");
    // The bounds in this toolkit assume the transmitted symbol is the most
    // likely observation: eps/(q-1) < 1 - delta - eps.
    if (!(flip_each() < keep()))
      throw ConfigError(
          "dominance violated: eps/(q-1) >= 1-delta-eps; observing the "
          "transmitted symbol would not be the most likely outcome");
  }
};

/// A discrete channel: a one-shot row-stochastic matrix, used memorylessly
/// `uses()` times. Alphabets of the extended channel are Cartesian powers and
/// are addressed by mixed-radix indices (first coordinate most significant).
/// Values are immutable after construction.
template <class S>
class Channel {
 public:
  static Channel dense(std::vector<std::vector<S>> rows) {
    Channel ch;
    ch.base_ = std::move(rows);
    ch.check_matrix();
    ch.symmetric_ = ch.compute_symmetric();
    return ch;
  }

  /// The q-ary erasure/error channel; output alphabet is X plus the erasure
  /// symbol (index q).
  static Channel erasure_error(ErasureErrorParams<S> p) {
    p.validate();
    p.erasure_output = true;
    std::vector<std::vector<S>> rows(static_cast<std::size_t>(p.q));
    for (int x = 0; x < p.q; ++x) {
      auto& row = rows[static_cast<std::size_t>(x)];
      row.assign(static_cast<std::size_t>(p.q) + 1, p.flip_each());
      row[static_cast<std::size_t>(x)] = p.keep();
      row[static_cast<std::size_t>(p.q)] = p.delta;
    }
    Channel ch = dense(std::move(rows));
    ch.family_ = p;
    return ch;
  }

  /// Binary symmetric channel on a two-letter output alphabet (no erasure
  /// column), tagged as the eps-flip member of the erasure/error family.
  static Channel bsc(S eps) {
    ErasureErrorParams<S> p{2, eps, num_traits<S>::zero(), false};
    p.validate();
    const S keep = p.keep();
    Channel ch = dense({{keep, eps}, {eps, keep}});
    ch.family_ = p;
    return ch;
  }

  /// Binary erasure channel.
  static Channel bec(S delta) {
    return erasure_error(ErasureErrorParams<S>{2, num_traits<S>::zero(), delta, true});
  }

  /// Memoryless n-fold extension. Alphabet sizes are checked against the
  /// enumeration budget.
  Channel power(std::uint64_t n, std::uint64_t budget = kDefaultBudget) const {
    if (n < 1) throw ConfigError("channel power requires n >= 1");
    Channel ch = *this;
    ch.uses_ = uses_ * n;
    bool ok = false;
    std::uint64_t out = checked_pow_u64(base_outputs(), static_cast<unsigned>(ch.uses_), &ok);
    if (!ok || out > budget)
      throw BudgetError("output space |Y|^n = " + std::to_string(base_outputs()) + "^" +
                        std::to_string(ch.uses_) + " exceeds enumeration budget " +
                        std::to_string(budget));
    return ch;
  }

  std::uint64_t base_inputs() const { return base_.size(); }
  std::uint64_t base_outputs() const { return base_.empty() ? 0 : base_[0].size(); }
  std::uint64_t uses() const { return uses_; }

  std::uint64_t input_size() const {
    bool ok = false;
    std::uint64_t v = checked_pow_u64(base_inputs(), static_cast<unsigned>(uses_), &ok);
    if (!ok) throw BudgetError("input space size overflows 64 bits");
    return v;
  }
  std::uint64_t output_size() const {
    bool ok = false;
    std::uint64_t v = checked_pow_u64(base_outputs(), static_cast<unsigned>(uses_), &ok);
    if (!ok) throw BudgetError("output space size overflows 64 bits");
    return v;
  }

  const S& base_entry(std::uint64_t x, std::uint64_t y) const { return base_[x][y]; }

  /// Transition probability of the extended channel.
  S trans(std::uint64_t x, std::uint64_t y) const {
    S w = num_traits<S>::one();
    const std::uint64_t bi = base_inputs();
    const std::uint64_t bo = base_outputs();
    for (std::uint64_t i = 0; i < uses_; ++i) {
      w *= base_[x % bi][y % bo];
      x /= bi;
      y /= bo;
    }
    return w;
  }

  const std::optional<ErasureErrorParams<S>>& family() const { return family_; }

  /// (erasure count, flip count) sufficient statistic of the erasure/error
  /// family; valid only for family-tagged channels.
  std::pair<int, int> erasure_stat(std::uint64_t x, std::uint64_t y) const {
    const std::uint64_t bi = base_inputs();
    const std::uint64_t bo = base_outputs();
    const std::uint64_t erasure = family_ && family_->erasure_output
                                      ? static_cast<std::uint64_t>(family_->q)
                                      : bo;  // no erasure symbol
    int e = 0, d = 0;
    for (std::uint64_t i = 0; i < uses_; ++i) {
      const std::uint64_t xs = x % bi;
      const std::uint64_t ys = y % bo;
      if (ys == erasure)
        ++e;
      else if (ys != xs)
        ++d;
      x /= bi;
      y /= bo;
    }
    return {e, d};
  }

  bool symmetric() const { return symmetric_; }

  /// The sorted base rows backing the symmetry decision. A memoryless power
  /// is symmetric exactly when its base is, so the fingerprint of the base
  /// channel decides for every n.
  std::vector<std::vector<S>> sorted_row_fingerprint() const {
    std::vector<std::vector<S>> rows = base_;
    for (auto& r : rows) std::sort(r.begin(), r.end());
    return rows;
  }

  void output_digits(std::uint64_t y, std::vector<int>& out) const {
    const std::uint64_t bo = base_outputs();
    out.assign(uses_, 0);
    for (std::uint64_t i = uses_; i-- > 0;) {
      out[i] = static_cast<int>(y % bo);
      y /= bo;
    }
  }

  void input_digits(std::uint64_t x, std::vector<int>& out) const {
    const std::uint64_t bi = base_inputs();
    out.assign(uses_, 0);
    for (std::uint64_t i = uses_; i-- > 0;) {
      out[i] = static_cast<int>(x % bi);
      x /= bi;
    }
  }

  std::uint64_t input_index(const std::vector<int>& digits) const {
    const std::uint64_t bi = base_inputs();
    std::uint64_t x = 0;
    for (int d : digits) x = x * bi + static_cast<std::uint64_t>(d);
    return x;
  }

 private:
  Channel() = default;

  void check_matrix() const {
    if (base_.empty() || base_[0].empty()) throw ConfigError("empty channel matrix");
    const std::size_t cols = base_[0].size();
    for (const auto& row : base_) {
      if (row.size() != cols) throw ConfigError("ragged channel matrix");
      Accum<S> sum;
      for (const auto& w : row) {
        if (w < num_traits<S>::zero()) throw ConfigError("negative channel entry");
        sum.add(w);
      }
      if constexpr (num_traits<S>::exact) {
        if (sum.total() != num_traits<S>::one())
          throw ConfigError("channel row does not sum to 1");
      } else {
        if (std::fabs(num_traits<S>::to_double(sum.total()) - 1.0) > 1e-12)
          throw ConfigError("channel row does not sum to 1 within 1e-12");
      }
    }
  }

  bool compute_symmetric() const {
    auto rows = sorted_row_fingerprint();
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if constexpr (num_traits<S>::exact) {
        if (rows[i] != rows[0]) return false;
      } else {
        for (std::size_t j = 0; j < rows[0].size(); ++j)
          if (!num_traits<S>::same_level(rows[i][j], rows[0][j])) return false;
      }
    }
    return true;
  }

  std::vector<std::vector<S>> base_;
  std::uint64_t uses_ = 1;
  bool symmetric_ = false;
  std::optional<ErasureErrorParams<S>> family_;
};

template <class S>
Channel<S> erasure_error_channel(const ErasureErrorParams<S>& p) {
  return Channel<S>::erasure_error(p);
}

template <class S>
Channel<S> product_channel(const Channel<S>& ch, std::uint64_t n,
                           std::uint64_t budget = kDefaultBudget) {
  return ch.power(n, budget);
}

template <class S>
bool is_symmetric(const Channel<S>& ch) {
  return ch.symmetric();
}

/// Auxiliary distribution on the output alphabet of a (possibly extended)
/// channel, stored densely.
template <class S>
struct OutputDistribution {
  std::vector<S> p;

  static OutputDistribution uniform(std::uint64_t size) {
    OutputDistribution q;
    const S v = num_traits<S>::one() / num_traits<S>::from_int(static_cast<long long>(size));
    q.p.assign(size, v);
    return q;
  }

  bool is_uniform() const {
    for (const auto& v : p)
      if (v != p[0]) return false;
    return true;
  }

  void validate() const {
    Accum<S> sum;
    for (const auto& v : p) {
      if (v < num_traits<S>::zero()) throw ConfigError("negative mass in distribution");
      sum.add(v);
    }
    if constexpr (num_traits<S>::exact) {
      if (sum.total() != num_traits<S>::one())
        throw ConfigError("distribution does not sum to 1");
    } else {
      if (std::fabs(num_traits<S>::to_double(sum.total()) - 1.0) > 1e-12)
        throw ConfigError("distribution does not sum to 1 within 1e-12");
    }
  }
};

namespace detail {

/// Aggregated (ratio level -> conditional mass) profile of one input row,
/// merged by level, zero-mass levels dropped, sorted by descending level.
template <class S>
std::vector<std::pair<ExtRatio<S>, S>> ratio_profile(const Channel<S>& ch,
                                                     const OutputDistribution<S>& q,
                                                     std::uint64_t x) {
  std::vector<std::pair<ExtRatio<S>, S>> raw;
  const std::uint64_t ny = ch.output_size();
  raw.reserve(64);
  for (std::uint64_t y = 0; y < ny; ++y) {
    S w = ch.trans(x, y);
    if (!(w > num_traits<S>::zero())) continue;
    raw.emplace_back(ratio_of(w, q.p[y]), std::move(w));
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return b.first < a.first; });
  std::vector<std::pair<ExtRatio<S>, S>> merged;
  for (auto& [lvl, w] : raw) {
    if (!merged.empty() && (merged.back().first == lvl ||
                            (!merged.back().first.inf && !lvl.inf &&
                             num_traits<S>::same_level(merged.back().first.v, lvl.v))))
      merged.back().second += w;
    else
      merged.emplace_back(lvl, w);
  }
  return merged;
}

template <class S>
bool profiles_equal(const std::vector<std::pair<ExtRatio<S>, S>>& a,
                    const std::vector<std::pair<ExtRatio<S>, S>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& [la, ma] = a[i];
    const auto& [lb, mb] = b[i];
    if (la.inf != lb.inf) return false;
    if constexpr (num_traits<S>::exact) {
      if (!la.inf && la.v != lb.v) return false;
      if (ma != mb) return false;
    } else {
      if (!la.inf && !num_traits<S>::same_level(la.v, lb.v)) return false;
      if (std::fabs(num_traits<S>::to_double(ma) - num_traits<S>::to_double(mb)) > 1e-12)
        return false;
    }
  }
  return true;
}

}  // namespace detail

/// Membership test for the symmetry-preserving set: Q qualifies when the
/// tilted tail function F_x(tau,Q) = sum_y W(y|x) 1[W(y|x) >= tau Q(y)] is the
/// same for every input, decided exactly by comparing per-input aggregated
/// (ratio level -> conditional mass) profiles. Defined for symmetric channels
/// only. The equiprobable distribution always qualifies.
template <class S>
bool q_in_Qc(const Channel<S>& ch, const OutputDistribution<S>& q,
             std::uint64_t budget = kDefaultBudget) {
  if (!ch.symmetric())
    throw HypothesisError("auxiliary-distribution symmetry set is defined for symmetric channels");
  if (q.p.size() != ch.output_size())
    throw ConfigError("distribution size does not match channel output space");
  if (q.is_uniform()) return true;
  if (ch.output_size() > budget || ch.input_size() > budget)
    throw BudgetError("membership scan over |X| x |Y| = " + std::to_string(ch.input_size()) +
                      " x " + std::to_string(ch.output_size()) + " exceeds budget " +
                      std::to_string(budget));
  const auto ref = detail::ratio_profile(ch, q, 0);
  const std::uint64_t nx = ch.input_size();
  for (std::uint64_t x = 1; x < nx; ++x)
    if (!detail::profiles_equal(ref, detail::ratio_profile(ch, q, x))) return false;
  return true;
}

/// Validate a per-erasure-count tilting table for blocklength n: integers in
/// [0, n-e].
inline void validate_psi(unsigned n, const std::vector<int>& psi) {
  if (psi.size() != static_cast<std::size_t>(n) + 1)
    throw ConfigError("psi table must have n+1 entries");
  for (unsigned e = 0; e <= n; ++e) {
    if (psi[e] < 0) throw ConfigError("psi entries must be non-negative");
    if (psi[e] > static_cast<int>(n - e))
      throw ConfigError("psi(" + std::to_string(e) + ") = " + std::to_string(psi[e]) +
                        " exceeds n-e = " + std::to_string(n - e) +
                        "; the remaining-symbol exponent would be negative");
  }
}

/// Normalizer of the tilted auxiliary distribution:
/// c = sum_e C(n,e) q^(n-e) keep^(n-e) delta^e phi^psi(e), phi = flip/keep.
template <class S>
S erasure_aux_normalizer(unsigned n, const ErasureErrorParams<S>& params,
                         const std::vector<int>& psi) {
  validate_psi(n, psi);
  const S keep = params.keep();
  const S phi = params.flip_each() / keep;
  const BigInt qn = params.q;
  Accum<S> csum;
  for (unsigned e = 0; e <= n; ++e) {
    S term = num_traits<S>::from_rat(Rat(binomial(n, e) * pow_bigint(qn, n - e)));
    term *= pow_nat(keep, n - e);
    term *= pow_nat(params.delta, e);
    term *= pow_nat(phi, static_cast<unsigned>(psi[e]));
    csum.add(term);
  }
  return csum.total();
}

/// Tilted auxiliary distribution for the n-fold erasure/error channel,
/// together with its normalizing constant c. psi[e] (0 <= e <= n) is the
/// per-erasure-count tilting exponent, restricted to integers in [0, n-e].
/// With eps = 0 the construction degenerates to the erasure-only limit form
/// (support only on outputs whose erasure count has psi[e] = 0).
template <class S>
std::pair<OutputDistribution<S>, S> erasure_aux_distribution(
    unsigned n, const ErasureErrorParams<S>& params, const std::vector<int>& psi,
    std::uint64_t budget = kDefaultBudget) {
  params.validate();
  if (!params.erasure_output)
    throw ConfigError("auxiliary construction expects the erasure-extended output alphabet");
  const S keep = params.keep();
  const S flip = params.flip_each();
  const S c = erasure_aux_normalizer(n, params, psi);

  Channel<S> ext = erasure_error_channel(params).power(n, budget);
  const std::uint64_t ny = ext.output_size();
  OutputDistribution<S> q;
  q.p.assign(ny, num_traits<S>::zero());
  std::vector<int> digits;
  for (std::uint64_t y = 0; y < ny; ++y) {
    ext.output_digits(y, digits);
    unsigned e = 0;
    for (int d : digits) e += d == params.q;
    S unnorm = pow_nat(params.delta, e);
    unnorm *= pow_nat(flip, static_cast<unsigned>(psi[e]));
    unnorm *= pow_nat(keep, n - e - static_cast<unsigned>(psi[e]));
    q.p[y] = unnorm / c;
  }
  return {std::move(q), c};
}

/// Output law of the extended channel under input x, as a dense distribution.
template <class S>
OutputDistribution<S> output_law(const Channel<S>& ch, std::uint64_t x,
                                 std::uint64_t budget = kDefaultBudget) {
  if (ch.output_size() > budget)
    throw BudgetError("output law over |Y| = " + std::to_string(ch.output_size()) +
                      " exceeds budget " + std::to_string(budget));
  OutputDistribution<S> q;
  const std::uint64_t ny = ch.output_size();
  q.p.resize(ny);
  for (std::uint64_t y = 0; y < ny; ++y) q.p[y] = ch.trans(x, y);
  return q;
}

}  // namespace qpc
