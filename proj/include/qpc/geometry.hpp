#pragma once

// Likelihood-ratio geometry of a code on a channel: ratio spectra (per-level
// auxiliary and conditional masses), covering/packing radii, and the
// perfect / quasi-perfect classification.
//
// Scans ignore outputs that carry no mass under the auxiliary distribution
// nor under any codeword-conditional law; such outputs never occur and do not
// enter any probability on either side of the bounds.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "qpc/channel.hpp"
#include "qpc/errors.hpp"
#include "qpc/numeric.hpp"

namespace qpc {

template <class S>
struct LevelMass {
  ExtRatio<S> tau;
  S q_mass;  // auxiliary mass of the shell at this level
  S w_mass;  // conditional mass of the shell (input-independent on Qc)
};

/// The level set of likelihood ratios W(y|x)/Q(y) with per-level masses,
/// sorted by descending level, plus prefix sums for tail queries.
template <class S>
struct RatioSpectrum {
  std::vector<LevelMass<S>> levels;
  /// False when the caller computed this per-input without a symmetry
  /// guarantee (Q outside the symmetry-preserving set).
  bool input_independent = true;

  /// Q-mass of the closed sphere: sum of q_mass over levels >= tau.
  S q_tail_geq(const ExtRatio<S>& tau) const {
    Accum<S> a;
    for (const auto& lv : levels) {
      if (lv.tau < tau) break;
      a.add(lv.q_mass);
    }
    return a.total();
  }
  /// Q-mass of the open interior: sum of q_mass over levels > tau.
  S q_tail_gt(const ExtRatio<S>& tau) const {
    Accum<S> a;
    for (const auto& lv : levels) {
      if (!(lv.tau > tau)) break;
      a.add(lv.q_mass);
    }
    return a.total();
  }
  /// Q-mass of the shell at exactly tau (0 when absent).
  S q_at(const ExtRatio<S>& tau) const {
    for (const auto& lv : levels) {
      if (lv.tau == tau) return lv.q_mass;
      if (lv.tau < tau) break;
    }
    return num_traits<S>::zero();
  }
  /// Conditional mass below or at a finite gamma, excluding the +inf level.
  S w_tail_leq(const ExtRatio<S>& gamma) const {
    Accum<S> a;
    for (const auto& lv : levels)
      if (!lv.tau.inf && lv.tau <= gamma) a.add(lv.w_mass);
    return a.total();
  }

  const LevelMass<S>* find(const ExtRatio<S>& tau) const {
    for (const auto& lv : levels) {
      if (lv.tau == tau) return &lv;
      if (lv.tau < tau) break;
    }
    return nullptr;
  }
};

/// Per-input ratio spectrum of (channel, Q). The input-independence guarantee
/// holds when Q lies in the symmetry-preserving set; callers that have not
/// established membership should mark the result via `input_independent`.
template <class S>
RatioSpectrum<S> spectrum(const Channel<S>& ch, const OutputDistribution<S>& q,
                          std::uint64_t x, std::uint64_t budget = kDefaultBudget) {
  const std::uint64_t ny = ch.output_size();
  if (ny > budget)
    throw BudgetError("spectrum over |Y| = " + std::to_string(ny) + " exceeds budget " +
                      std::to_string(budget));
  if (q.p.size() != ny) throw ConfigError("distribution size does not match output space");

  struct Entry {
    ExtRatio<S> r;
    S qm, wm;
  };
  std::vector<Entry> raw;
  const S zero = num_traits<S>::zero();
  for (std::uint64_t y = 0; y < ny; ++y) {
    S w = ch.trans(x, y);
    const S& qy = q.p[y];
    const bool wpos = w > zero;
    const bool qpos = qy > zero;
    if (!wpos && !qpos) continue;
    raw.push_back({ratio_of(w, qy), qy, std::move(w)});
  }
  std::sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) { return b.r < a.r; });

  RatioSpectrum<S> sp;
  for (auto& e : raw) {
    if (!sp.levels.empty() &&
        (sp.levels.back().tau == e.r ||
         (!sp.levels.back().tau.inf && !e.r.inf &&
          num_traits<S>::same_level(sp.levels.back().tau.v, e.r.v)))) {
      sp.levels.back().q_mass += e.qm;
      sp.levels.back().w_mass += e.wm;
    } else {
      sp.levels.push_back({e.r, std::move(e.qm), std::move(e.wm)});
    }
  }
  return sp;
}

template <class S>
struct RadiusPair {
  ExtRatio<S> eta;  // covering radius: largest level at which the spheres still cover
  ExtRatio<S> nu;   // packing radius: smallest level with pairwise-disjoint interiors
};

enum class QPVerdict { kPerfect, kQuasiPerfect, kNeither };

inline const char* to_string(QPVerdict v) {
  switch (v) {
    case QPVerdict::kPerfect: return "perfect";
    case QPVerdict::kQuasiPerfect: return "quasi-perfect";
    default: return "neither";
  }
}

template <class S>
struct QPClassification {
  QPVerdict verdict = QPVerdict::kNeither;
  ExtRatio<S> witness_gamma;  // the covering radius when the verdict holds
  RadiusPair<S> radii;
};

namespace detail {

/// Extremes of the per-output best and second-best (optionally weighted)
/// ratios over the codewords. The covering radius is the minimum best ratio,
/// the packing radius the maximum second-best. `measure` may be unnormalized;
/// only the products weight * W(y|x) / measure(y) matter.
template <class S>
RadiusPair<S> scan_radii(const std::vector<std::uint64_t>& words, const std::vector<S>* weights,
                         const Channel<S>& ch, const std::vector<S>& measure,
                         std::uint64_t budget) {
  const std::uint64_t ny = ch.output_size();
  if (ny > budget)
    throw BudgetError("radius scan over |Y| = " + std::to_string(ny) + " exceeds budget " +
                      std::to_string(budget));
  if (measure.size() != ny) throw ConfigError("measure size does not match output space");
  if (words.empty()) throw ConfigError("radius scan needs a nonempty code");
  const S zero = num_traits<S>::zero();

  ExtRatio<S> eta = ExtRatio<S>::infinity();
  ExtRatio<S> nu = ExtRatio<S>::zero();
  for (std::uint64_t y = 0; y < ny; ++y) {
    const S& qy = measure[y];
    ExtRatio<S> best = ExtRatio<S>::zero();
    ExtRatio<S> second = ExtRatio<S>::zero();
    bool relevant = qy > zero;
    for (std::size_t m = 0; m < words.size(); ++m) {
      S w = ch.trans(words[m], y);
      if (w > zero) relevant = true;
      ExtRatio<S> r = ratio_of(w, qy);
      if (!r.inf && weights) r.v *= (*weights)[m];
      if (best < r) {
        second = best;
        best = r;
      } else if (second < r) {
        second = r;
      }
    }
    if (!relevant) continue;
    if (best < eta) eta = best;
    if (nu < second) nu = second;
  }
  return {eta, nu};
}

}  // namespace detail

/// Covering and packing radii of a code (codewords given as extended-channel
/// input indices) with respect to an auxiliary distribution.
template <class S>
RadiusPair<S> radii(const std::vector<std::uint64_t>& codewords, const Channel<S>& ch,
                    const OutputDistribution<S>& q, std::uint64_t budget = kDefaultBudget) {
  return detail::scan_radii<S>(codewords, nullptr, ch, q.p, budget);
}

/// Classification against an arbitrary positive measure; the verdict is
/// invariant under rescaling the measure (only the product level * measure
/// enters the sphere definitions).
template <class S>
QPClassification<S> classify_qp_measure(const std::vector<std::uint64_t>& codewords,
                                        const Channel<S>& ch, const std::vector<S>& measure,
                                        std::uint64_t budget = kDefaultBudget) {
  RadiusPair<S> rp = detail::scan_radii<S>(codewords, nullptr, ch, measure, budget);
  QPClassification<S> out;
  out.radii = rp;
  if (rp.nu < rp.eta)
    out.verdict = QPVerdict::kPerfect;
  else if (rp.nu == rp.eta)
    out.verdict = QPVerdict::kQuasiPerfect;
  else
    out.verdict = QPVerdict::kNeither;
  // For perfect codes the witness is pinned to the largest covering level;
  // quasi-perfect witnesses form the range [nu, eta] and the top is reported.
  if (out.verdict != QPVerdict::kNeither) out.witness_gamma = rp.eta;
  return out;
}

/// Perfect / quasi-perfect classification of a code for a symmetric channel
/// and a symmetry-preserving auxiliary distribution.
template <class S>
QPClassification<S> classify_qp(const std::vector<std::uint64_t>& codewords,
                                const Channel<S>& ch, const OutputDistribution<S>& q,
                                std::uint64_t budget = kDefaultBudget) {
  if (!ch.symmetric()) throw HypothesisError("classification requires a symmetric channel");
  if (!q_in_Qc(ch, q, budget))
    throw HypothesisError("auxiliary distribution is not symmetry-preserving");
  return classify_qp_measure(codewords, ch, q.p, budget);
}

}  // namespace qpc
