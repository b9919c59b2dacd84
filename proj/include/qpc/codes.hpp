#pragma once

// Codebooks over finite alphabets, exact ML/MAP error probabilities,
// minimum distance / Singleton check, exhaustive ML decoding, and the
// exhaustive best-code search for binary channels (canonical column-multiset
// enumeration).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qpc/channel.hpp"
#include "qpc/errors.hpp"
#include "qpc/numeric.hpp"

namespace qpc {

/// Ordered list of length-n codewords over a size-q alphabet. Words are
/// digit vectors; duplicates are rejected.
struct Codebook {
  int n = 0;
  int q = 2;
  std::vector<std::vector<std::uint8_t>> words;

  static Codebook from_words(int n, int q, std::vector<std::vector<std::uint8_t>> ws) {
    if (n < 1 || q < 2) throw ConfigError("codebook needs n >= 1 and q >= 2");
    if (ws.empty()) throw ConfigError("codebook needs at least one codeword");
    for (const auto& w : ws) {
      if (w.size() != static_cast<std::size_t>(n))
        throw ConfigError("codeword length differs from n");
      for (auto s : w)
        if (s >= q) throw ConfigError("codeword symbol outside alphabet");
    }
    std::set<std::vector<std::uint8_t>> uniq(ws.begin(), ws.end());
    if (uniq.size() != ws.size()) throw ConfigError("duplicate codewords rejected");
    Codebook c;
    c.n = n;
    c.q = q;
    c.words = std::move(ws);
    return c;
  }

  std::size_t size() const { return words.size(); }

  /// Index of codeword m in the extended-channel input space (first symbol
  /// most significant).
  std::uint64_t input_index(std::size_t m) const {
    std::uint64_t x = 0;
    for (auto s : words[m]) x = x * static_cast<std::uint64_t>(q) + s;
    return x;
  }

  std::vector<std::uint64_t> input_indices() const {
    std::vector<std::uint64_t> xs(size());
    for (std::size_t m = 0; m < size(); ++m) xs[m] = input_index(m);
    return xs;
  }
};

inline Codebook repetition_code(int n) {
  std::vector<std::vector<std::uint8_t>> ws(2);
  ws[0].assign(n, 0);
  ws[1].assign(n, 1);
  return Codebook::from_words(n, 2, std::move(ws));
}

/// All even-weight binary words of length n (single parity symbol, M = 2^(n-1)).
inline Codebook single_parity_check_code(int n) {
  std::vector<std::vector<std::uint8_t>> ws;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    if (__builtin_popcountll(v) % 2 != 0) continue;
    std::vector<std::uint8_t> w(n);
    for (int i = 0; i < n; ++i) w[i] = (v >> (n - 1 - i)) & 1;
    ws.push_back(std::move(w));
  }
  return Codebook::from_words(n, 2, std::move(ws));
}

/// The 16-word binary code of length 7 correcting one flip (systematic form).
inline Codebook hamming_7_4() {
  std::vector<std::vector<std::uint8_t>> ws;
  for (int msg = 0; msg < 16; ++msg) {
    std::uint8_t d1 = (msg >> 3) & 1, d2 = (msg >> 2) & 1, d3 = (msg >> 1) & 1, d4 = msg & 1;
    std::uint8_t p1 = d1 ^ d2 ^ d4, p2 = d1 ^ d3 ^ d4, p3 = d2 ^ d3 ^ d4;
    ws.push_back({d1, d2, d3, d4, p1, p2, p3});
  }
  return Codebook::from_words(7, 2, std::move(ws));
}

/// Exact ML error probability 1 - (1/M) sum_y max_m W(y|x_m) of a codebook on
/// the extended channel (equiprobable messages).
template <class S>
S ml_error_probability(const Codebook& code, const Channel<S>& ch,
                       std::uint64_t budget = kDefaultBudget) {
  if (ch.base_inputs() != static_cast<std::uint64_t>(code.q) ||
      ch.uses() != static_cast<std::uint64_t>(code.n))
    throw ConfigError("codebook does not match channel alphabet/blocklength");
  const std::uint64_t ny = ch.output_size();
  if (ny > budget)
    throw BudgetError("ML enumeration over |Y| = " + std::to_string(ny) + " exceeds budget " +
                      std::to_string(budget));
  const auto xs = code.input_indices();
  Accum<S> acc;
  for (std::uint64_t y = 0; y < ny; ++y) {
    S best = num_traits<S>::zero();
    for (auto x : xs) {
      S w = ch.trans(x, y);
      if (best < w) best = std::move(w);
    }
    acc.add(best);
  }
  return num_traits<S>::one() -
         acc.total() / num_traits<S>::from_int(static_cast<long long>(code.size()));
}

/// Exact MAP error probability 1 - sum_y max_v P_V(v) W(y|x_v) for one
/// codeword per source message.
template <class S>
S map_error_probability(const Codebook& code, const std::vector<S>& pv, const Channel<S>& ch,
                        std::uint64_t budget = kDefaultBudget) {
  if (pv.size() != code.size())
    throw ConfigError("source alphabet size differs from codebook size");
  const std::uint64_t ny = ch.output_size();
  if (ny > budget)
    throw BudgetError("MAP enumeration over |Y| = " + std::to_string(ny) + " exceeds budget " +
                      std::to_string(budget));
  const auto xs = code.input_indices();
  Accum<S> acc;
  for (std::uint64_t y = 0; y < ny; ++y) {
    S best = num_traits<S>::zero();
    for (std::size_t v = 0; v < xs.size(); ++v) {
      S w = pv[v] * ch.trans(xs[v], y);
      if (best < w) best = std::move(w);
    }
    acc.add(best);
  }
  return num_traits<S>::one() - acc.total();
}

/// ML decision for a single output: argmax_m W(y|x_m), ties to the lowest
/// index.
template <class S>
std::size_t exhaustive_ml_decode(const Codebook& code, const Channel<S>& ch, std::uint64_t y) {
  const auto xs = code.input_indices();
  std::size_t arg = 0;
  S best = ch.trans(xs[0], y);
  for (std::size_t m = 1; m < xs.size(); ++m) {
    S w = ch.trans(xs[m], y);
    if (best < w) {
      best = std::move(w);
      arg = m;
    }
  }
  return arg;
}

inline int hamming_distance(const std::vector<std::uint8_t>& a,
                            const std::vector<std::uint8_t>& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

/// Minimum pairwise Hamming distance (needs M >= 2).
inline int min_distance(const Codebook& code) {
  if (code.size() < 2) throw ConfigError("minimum distance needs at least two codewords");
  int best = code.n + 1;
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = i + 1; j < code.size(); ++j)
      best = std::min(best, hamming_distance(code.words[i], code.words[j]));
  return best;
}

/// Exact Singleton-equality check: M == q^(n - d_min + 1).
inline bool is_mds(const Codebook& code) {
  const int d = min_distance(code);
  return pow_bigint(code.q, static_cast<unsigned>(code.n - d + 1)) ==
         BigInt(static_cast<long long>(code.size()));
}

/// (n - log_q M + 1) - d_min, informational.
inline double singleton_defect(const Codebook& code) {
  const double logqM =
      std::log(static_cast<double>(code.size())) / std::log(static_cast<double>(code.q));
  return (code.n - logqM + 1.0) - static_cast<double>(min_distance(code));
}

// ---------------------------------------------------------------------------
// Canonical exhaustive search over binary codebooks.
//
// A binary codebook is represented by the multiset of its column patterns
// (one M-bit pattern per coordinate). Coordinate permutations and
// per-coordinate relabelings are exactly the error-probability-preserving
// isometries for symmetric memoryless binary channels, so patterns are
// reduced modulo complement and the multiset enumerated in non-decreasing
// order. Every codebook maps into this enumeration, which makes the search
// exhaustive whenever it completes.

/// Calls visit(rows) for every canonical codebook with distinct rows; rows
/// are M bit-masks over n coordinates (bit j = coordinate j). Returns false
/// if the visitor aborted the enumeration.
template <class Visitor>
bool enumerate_binary_codebooks(int n, int M, Visitor&& visit) {
  if (n < 1 || n > 62 || M < 1 || M > 8)
    throw ConfigError("binary codebook enumeration supports n <= 62, M <= 8");
  const std::uint64_t reps = std::uint64_t{1} << (M - 1);  // column classes up to complement
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(M), 0);

  std::function<bool(int, std::uint64_t)> rec = [&](int pos, std::uint64_t from) -> bool {
    if (pos == n) {
      for (int m = 0; m < M; ++m) {
        std::uint64_t r = 0;
        for (int j = 0; j < n; ++j) r |= ((cols[j] >> m) & 1ull) << j;
        rows[static_cast<std::size_t>(m)] = r;
      }
      for (int a = 0; a < M; ++a)
        for (int b = a + 1; b < M; ++b)
          if (rows[a] == rows[b]) return true;  // duplicate rows; skip
      return visit(static_cast<const std::vector<std::uint64_t>&>(rows));
    }
    for (std::uint64_t c = from; c < reps; ++c) {
      cols[static_cast<std::size_t>(pos)] = c;
      if (!rec(pos + 1, c)) return false;
    }
    return true;
  };
  return rec(0, 0);
}

template <class S>
struct CodeSearchResult {
  Codebook best;
  S pe = num_traits<S>::one();
  bool exact = true;       // false when the enumeration was truncated by budget
  std::uint64_t examined = 0;
};

namespace detail {

/// keep/flip/erase weight table W[e][d] for n uses of a binary erasure/error
/// channel.
template <class S>
std::vector<std::vector<S>> family_weight_table(const ErasureErrorParams<S>& p, int n) {
  const S keep = p.keep();
  const S flip = p.flip_each();
  std::vector<std::vector<S>> w(static_cast<std::size_t>(n) + 1);
  for (int e = 0; e <= n; ++e) {
    w[e].resize(static_cast<std::size_t>(n - e) + 1);
    for (int d = 0; d + e <= n; ++d)
      w[e][d] = pow_nat(p.delta, static_cast<unsigned>(e)) *
                pow_nat(flip, static_cast<unsigned>(d)) *
                pow_nat(keep, static_cast<unsigned>(n - e - d));
  }
  return w;
}

}  // namespace detail

/// Exhaustive minimum-Pe codebook for n uses of a one-shot binary
/// erasure/error channel, up to coordinate permutation and per-coordinate
/// relabeling. Exact within budget; on truncation returns the best found
/// with exact = false.
template <class S>
CodeSearchResult<S> best_code_search(int n, int M, const Channel<S>& oneshot,
                                     std::uint64_t budget = kDefaultBudget) {
  const auto& fam = oneshot.family();
  if (!fam || fam->q != 2)
    throw ConfigError("best_code_search supports the binary erasure/error family");
  if (oneshot.uses() != 1) throw ConfigError("best_code_search expects a one-shot channel");
  if (n < 1 || n > 62 || M < 1 || M > 8)
    throw ConfigError("best_code_search supports n <= 62, M <= 8");

  const bool with_erasures = fam->erasure_output && fam->delta > num_traits<S>::zero();
  const auto wtab = detail::family_weight_table(*fam, n);
  const S zero = num_traits<S>::zero();
  const S one = num_traits<S>::one();
  const S inv_m = one / num_traits<S>::from_int(M);

  bool ok = false;
  const std::uint64_t per_book =
      checked_pow_u64(with_erasures ? 3 : 2, static_cast<unsigned>(n), &ok) *
      static_cast<std::uint64_t>(M);
  const std::uint64_t book_cap = std::max<std::uint64_t>(1, (budget * 16) / std::max<std::uint64_t>(1, per_book));

  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::vector<std::uint64_t>> hist(static_cast<std::size_t>(n) + 1,
                                               std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));

  CodeSearchResult<S> result;
  bool have_best = false;
  std::vector<std::uint64_t> best_rows;

  enumerate_binary_codebooks(n, M, [&](const std::vector<std::uint64_t>& rows) -> bool {
    if (result.examined >= book_cap) {
      result.exact = false;
      return false;
    }
    ++result.examined;
    for (auto& h : hist) std::fill(h.begin(), h.end(), 0);

    if (!with_erasures) {
      for (std::uint64_t y = 0; y <= full; ++y) {
        int dmin = n + 1;
        for (auto r : rows) dmin = std::min(dmin, __builtin_popcountll(y ^ r));
        ++hist[0][static_cast<std::size_t>(dmin)];
      }
    } else {
      for (std::uint64_t mask = 0; mask <= full; ++mask) {
        const int e = __builtin_popcountll(mask);
        const std::uint64_t compl_mask = full & ~mask;
        std::uint64_t p = compl_mask;
        while (true) {  // all sub-patterns of the unerased coordinates
          int dmin = n + 1;
          for (auto r : rows) dmin = std::min(dmin, __builtin_popcountll((p ^ r) & compl_mask));
          ++hist[static_cast<std::size_t>(e)][static_cast<std::size_t>(dmin)];
          if (p == 0) break;
          p = (p - 1) & compl_mask;
        }
      }
    }

    Accum<S> acc;
    for (int e = 0; e <= n; ++e)
      for (int d = 0; d + e <= n; ++d)
        if (hist[e][d] > 0)
          acc.add(num_traits<S>::from_int(static_cast<long long>(hist[e][d])) * wtab[e][d]);
    S pe = one - acc.total() * inv_m;
    if (pe < zero) pe = zero;

    if (!have_best || pe < result.pe) {
      result.pe = std::move(pe);
      best_rows = rows;
      have_best = true;
    }
    return true;
  });

  if (!have_best) throw ConfigError("no valid codebook: M distinct rows need more coordinates");
  std::vector<std::vector<std::uint8_t>> words(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    words[m].resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) words[m][j] = (best_rows[m] >> j) & 1;
  }
  result.best = Codebook::from_words(n, 2, std::move(words));
  return result;
}

}  // namespace qpc
