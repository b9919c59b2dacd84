#pragma once

// Seeded Monte Carlo simulation of codes over the erasure/error family.
// Each trial draws from its own counter-based substream, so failure counts
// are independent of how trials are partitioned across workers; channel
// outcomes are sampled exactly from the rational transition probabilities.

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qpc/channel.hpp"
#include "qpc/codes.hpp"
#include "qpc/errors.hpp"
#include "qpc/reed_solomon.hpp"

namespace qpc {

/// Counter-based per-trial generator (splitmix64 stream): the stream for
/// (seed, trial) is identical regardless of which worker runs the trial.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) {
    state_ = seed + 0x9E3779B97F4A7C15ull * (trial + 1);
    next();  // decorrelate adjacent trial counters
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Exactly uniform draw from [0, bound) via rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw ConfigError("uniform draw from empty range");
    const std::uint64_t rem = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t u = next();
    if (rem != 0) {
      const std::uint64_t limit = 0 - rem;  // largest multiple of bound
      while (u >= limit) u = next();
    }
    return u % bound;
  }

 private:
  std::uint64_t state_;
};

/// Per-symbol sampler for the erasure/error family with exact rational
/// thresholds (the common denominator must fit 64 bits).
class ErasureErrorSampler {
 public:
  explicit ErasureErrorSampler(const ErasureErrorParams<Rat>& p) : q_(p.q) {
    p.validate();
    const Rat keep = p.keep();
    const Rat flip = p.flip_each();
    BigInt den = boost::multiprecision::lcm(
        boost::multiprecision::lcm(boost::multiprecision::denominator(keep),
                                   boost::multiprecision::denominator(p.delta)),
        boost::multiprecision::denominator(flip));
    if (den > BigInt(std::numeric_limits<std::int64_t>::max()))
      throw ConfigError("channel probabilities too fine for exact 64-bit sampling");
    den_ = den.convert_to<std::uint64_t>();
    keep_num_ = (Rat(den) * keep).convert_to<std::uint64_t>();
    erase_num_ = (Rat(den) * p.delta).convert_to<std::uint64_t>();
    flip_num_ = (Rat(den) * flip).convert_to<std::uint64_t>();
    if (keep_num_ + erase_num_ + flip_num_ * static_cast<std::uint64_t>(q_ - 1) != den_)
      throw InternalError("sampler thresholds do not partition the denominator");
  }

  /// Output symbol for the given input: [0,q) or q for an erasure.
  int sample(int input, TrialRng& rng) const {
    const std::uint64_t u = rng.below(den_);
    if (u < keep_num_) return input;
    if (u < keep_num_ + erase_num_) return q_;
    const std::uint64_t j = (u - keep_num_ - erase_num_) / flip_num_;
    return static_cast<int>(j) < input ? static_cast<int>(j) : static_cast<int>(j) + 1;
  }

 private:
  int q_;
  std::uint64_t den_, keep_num_, erase_num_, flip_num_;
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for failures/trials at normal quantile z.
inline WilsonInterval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct TrialReport {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::optional<double> estimate;  // empty when trials == 0
  double ci95_lo = 0.0;
  double ci95_hi = 1.0;
  std::uint64_t seed = 0;
  std::string decoder;
};

enum class DecoderKind { kExhaustiveMl, kBoundedDistance };

inline const char* to_string(DecoderKind k) {
  return k == DecoderKind::kExhaustiveMl ? "exhaustive-ml" : "errors-and-erasures-bd";
}

namespace detail {

inline constexpr double kZ95 = 1.959963984540054;

/// Runs `trials` i.i.d. trials partitioned over `workers` threads.
/// trial(rng) must return true on decoding failure and be safe to call
/// concurrently.
template <class TrialFn>
TrialReport run_partitioned(std::uint64_t trials, std::uint64_t seed, int workers,
                            std::string decoder_name, TrialFn&& trial) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  std::vector<std::uint64_t> fails(static_cast<std::size_t>(workers), 0);
  auto run_range = [&](int w, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t f = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      TrialRng rng(seed, t);
      f += trial(rng) ? 1 : 0;
    }
    fails[static_cast<std::size_t>(w)] = f;
  };
  if (workers == 1) {
    run_range(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t lo = trials * static_cast<std::uint64_t>(w) / workers;
      const std::uint64_t hi = trials * (static_cast<std::uint64_t>(w) + 1) / workers;
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  TrialReport rep;
  rep.trials = trials;
  for (auto f : fails) rep.failures += f;
  rep.seed = seed;
  rep.decoder = std::move(decoder_name);
  if (trials > 0) {
    rep.estimate = static_cast<double>(rep.failures) / static_cast<double>(trials);
    auto ci = wilson_interval(rep.failures, trials, kZ95);
    rep.ci95_lo = ci.lo;
    rep.ci95_hi = ci.hi;
  }
  return rep;
}

/// ML decision on a received word with erasure markers: fewest mismatches on
/// unerased coordinates, ties to the lowest index. For the erasure/error
/// family under the dominance condition this is exactly the likelihood order.
inline std::size_t ml_decode_received(const Codebook& code, const std::vector<int>& received) {
  std::size_t arg = 0;
  int best = code.n + 1;
  for (std::size_t m = 0; m < code.size(); ++m) {
    int d = 0;
    const auto& w = code.words[m];
    for (int i = 0; i < code.n; ++i) {
      const int r = received[static_cast<std::size_t>(i)];
      d += r != code.q && r != w[static_cast<std::size_t>(i)];
    }
    if (d < best) {
      best = d;
      arg = m;
    }
  }
  return arg;
}

}  // namespace detail

/// Monte Carlo error-rate estimate of an explicit codebook under exhaustive
/// ML decoding over the erasure/error channel.
inline TrialReport run_trials(const Codebook& code, const ErasureErrorParams<Rat>& params,
                              std::uint64_t trials, std::uint64_t seed, int workers = 1) {
  if (params.q != code.q) throw ConfigError("codebook alphabet differs from channel alphabet");
  const ErasureErrorSampler sampler(params);
  const std::uint64_t msg_count = code.size();
  return detail::run_partitioned(
      trials, seed, workers, to_string(DecoderKind::kExhaustiveMl), [&](TrialRng& rng) {
        const std::uint64_t msg = rng.below(msg_count);
        const auto& word = code.words[msg];
        std::vector<int> received(static_cast<std::size_t>(code.n));
        for (int i = 0; i < code.n; ++i)
          received[static_cast<std::size_t>(i)] = sampler.sample(word[static_cast<std::size_t>(i)], rng);
        return detail::ml_decode_received(code, received) != msg;
      });
}

/// Monte Carlo error-rate estimate of a Reed-Solomon code under exhaustive ML
/// (codebook within budget) or bounded-distance errors-and-erasures decoding.
inline TrialReport run_trials(const ReedSolomonCode& rs, const ErasureErrorParams<Rat>& params,
                              DecoderKind decoder, std::uint64_t trials, std::uint64_t seed,
                              int workers = 1, std::uint64_t budget = kDefaultBudget) {
  if (params.q != rs.q()) throw ConfigError("field size differs from channel alphabet");
  if (decoder == DecoderKind::kExhaustiveMl)
    return run_trials(rs.codebook(budget), params, trials, seed, workers);

  const ErasureErrorSampler sampler(params);
  const std::uint64_t msg_count = rs.message_count();
  return detail::run_partitioned(
      trials, seed, workers, to_string(decoder), [&](TrialRng& rng) {
        const std::uint64_t msg = rng.below(msg_count);
        const auto word = rs.encode_index(msg);
        std::vector<int> received(word.size());
        for (std::size_t i = 0; i < word.size(); ++i)
          received[i] = sampler.sample(word[i], rng);
        auto decoded = rs.bd_decode(received);
        return !decoded || rs.message_index(*decoded) != msg;
      });
}

}  // namespace qpc
