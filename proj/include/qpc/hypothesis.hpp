#pragma once

// Exact Neyman-Pearson trade-off between two finite distributions: the
// minimum error under P0 over all (randomized) tests whose error under P1 is
// at most beta, together with the achieving threshold test.

#include <algorithm>
#include <utility>
#include <vector>

#include "qpc/errors.hpp"
#include "qpc/numeric.hpp"

namespace qpc {

/// Randomized binary test: accept[z] is the probability of deciding
/// hypothesis 0 on observation z.
template <class S>
struct BinaryTest {
  std::vector<S> accept;
};

/// (error deciding 1 under P0, error deciding 0 under P1) of a test.
template <class S>
std::pair<S, S> test_errors(const std::vector<S>& p0, const std::vector<S>& p1,
                            const BinaryTest<S>& t) {
  if (p0.size() != p1.size() || t.accept.size() != p0.size())
    throw ConfigError("test_errors: alphabet mismatch");
  Accum<S> acc0, acc1;
  for (std::size_t z = 0; z < p0.size(); ++z) {
    const S& a = t.accept[z];
    if (a < num_traits<S>::zero() || a > num_traits<S>::one())
      throw ConfigError("test_errors: acceptance probability outside [0,1]");
    acc0.add(a * p0[z]);
    acc1.add(a * p1[z]);
  }
  return {num_traits<S>::one() - acc0.total(), acc1.total()};
}

/// Optimal trade-off point: minimum alpha, the spent beta, and the achieving
/// threshold test (gamma, theta).
template <class S>
struct NPPoint {
  S alpha;
  S beta;
  ExtRatio<S> gamma;
  S theta;
};

namespace detail {

template <class S>
struct RatioLevel {
  ExtRatio<S> r;
  S m0;  // P0 mass on the level
  S m1;  // P1 mass on the level
};

/// Ratio levels of P0/P1, merged, sorted descending.
template <class S>
std::vector<RatioLevel<S>> ratio_levels(const std::vector<S>& p0, const std::vector<S>& p1) {
  const S zero = num_traits<S>::zero();
  std::vector<RatioLevel<S>> raw;
  raw.reserve(p0.size());
  for (std::size_t z = 0; z < p0.size(); ++z) {
    if (!(p0[z] > zero) && !(p1[z] > zero)) continue;
    raw.push_back({ratio_of(p0[z], p1[z]), p0[z], p1[z]});
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return b.r < a.r; });
  std::vector<RatioLevel<S>> merged;
  for (auto& lv : raw) {
    if (!merged.empty() &&
        (merged.back().r == lv.r ||
         (!merged.back().r.inf && !lv.r.inf && num_traits<S>::same_level(merged.back().r.v, lv.r.v)))) {
      merged.back().m0 += lv.m0;
      merged.back().m1 += lv.m1;
    } else {
      merged.push_back(std::move(lv));
    }
  }
  return merged;
}

}  // namespace detail

/// Value of the threshold expression at a fixed gamma:
/// P0[ratio <= gamma] + gamma * P1[ratio > gamma] - gamma * beta.
/// The trade-off alpha is the supremum of this over gamma >= 0, attained on
/// the finite ratio levels.
template <class S>
S np_threshold_value(const std::vector<S>& p0, const std::vector<S>& p1,
                     const ExtRatio<S>& gamma, const S& beta) {
  if (gamma.inf) throw ConfigError("np_threshold_value expects a finite gamma");
  auto levels = detail::ratio_levels(p0, p1);
  Accum<S> below, above;
  for (const auto& lv : levels) {
    if (!lv.r.inf && lv.r <= gamma)
      below.add(lv.m0);
    else if (lv.r > gamma)
      above.add(lv.m1);
  }
  return below.total() + gamma.v * (above.total() - beta);
}

/// Minimum P0-error over tests with P1-error at most beta, via the threshold
/// test on likelihood-ratio levels: levels are accepted from the top, the
/// boundary level randomized so the P1 budget is met exactly. In exact mode
/// the result is cross-checked against the threshold expression at the
/// returned gamma.
template <class S>
NPPoint<S> alpha_beta(const std::vector<S>& p0, const std::vector<S>& p1, const S& beta) {
  if (p0.size() != p1.size()) throw ConfigError("alpha_beta: alphabet mismatch");
  const S zero = num_traits<S>::zero();
  const S one = num_traits<S>::one();
  if (beta < zero || beta > one) throw ConfigError("alpha_beta: beta outside [0,1]");

  auto levels = detail::ratio_levels(p0, p1);
  Accum<S> accepted0;  // P0 mass of the acceptance region
  S spent = zero;      // P1 mass of the acceptance region

  NPPoint<S> out;
  out.beta = beta;
  out.gamma = ExtRatio<S>::zero();
  out.theta = zero;

  bool boundary_set = false;
  for (const auto& lv : levels) {
    if (lv.r.inf) {  // costs no P1 mass; always accepted
      accepted0.add(lv.m0);
      continue;
    }
    if (!boundary_set && spent + lv.m1 <= beta) {
      accepted0.add(lv.m0);
      spent += lv.m1;
      out.gamma = lv.r;  // deepest fully-accepted level so far
      out.theta = one;
      continue;
    }
    if (!boundary_set) {
      // Randomize on this level so the P1 budget is met exactly.
      out.gamma = lv.r;
      out.theta = lv.m1 > zero ? (beta - spent) / lv.m1 : zero;
      accepted0.add(out.theta * lv.m0);
      spent = beta;
      boundary_set = true;
    }
  }
  if (!boundary_set && levels.empty()) out.gamma = ExtRatio<S>::zero();

  out.alpha = one - accepted0.total();

  if constexpr (num_traits<S>::exact) {
    if (np_threshold_value(p0, p1, out.gamma, beta) != out.alpha)
      throw InternalError("alpha_beta: threshold-expression cross-check failed");
  }
  return out;
}

}  // namespace qpc
