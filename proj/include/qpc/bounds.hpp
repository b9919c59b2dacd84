#pragma once

// Lower bounds on the error probability of codes over symmetric channels:
// the fixed-level sphere bound and its maximized (meta-converse) form, the
// closed-form family for erasure/error channels with a tunable tilting table,
// the erasure-only specialization, and the source-channel extension with
// message-dependent sphere scaling.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpc/channel.hpp"
#include "qpc/codes.hpp"
#include "qpc/errors.hpp"
#include "qpc/geometry.hpp"
#include "qpc/hypothesis.hpp"
#include "qpc/numeric.hpp"

namespace qpc {

/// A named bound value with the witness parameters that achieve it. `value`
/// is clipped to [0,1]; `raw` keeps the unclipped expression (fixed-level
/// evaluations can be vacuous and negative).
template <class S>
struct BoundReport {
  std::string name;
  S value = num_traits<S>::zero();
  S raw = num_traits<S>::zero();
  std::map<std::string, std::string> witness;
  std::optional<bool> attained;
};

namespace detail {

template <class S>
S clip01(const S& v) {
  if (v < num_traits<S>::zero()) return num_traits<S>::zero();
  if (v > num_traits<S>::one()) return num_traits<S>::one();
  return v;
}

/// gamma * (Q_i(gamma) - 1/M) + sum over finite levels tau <= gamma of the
/// conditional shell mass (which equals tau * Q_o(tau)).
template <class S>
S sphere_bound_expression(const RatioSpectrum<S>& sp, std::uint64_t M, const ExtRatio<S>& gamma) {
  if (gamma.inf) throw ConfigError("the sphere bound is evaluated at finite levels");
  const S inv_m = num_traits<S>::one() / num_traits<S>::from_int(static_cast<long long>(M));
  return gamma.v * (sp.q_tail_gt(gamma) - inv_m) + sp.w_tail_leq(gamma);
}

template <class S>
void require_symmetric_and_member(const Channel<S>& ch, const OutputDistribution<S>& q,
                                  std::uint64_t budget) {
  if (!ch.symmetric()) throw HypothesisError("bound requires a symmetric channel");
  if (!q_in_Qc(ch, q, budget))
    throw HypothesisError("auxiliary distribution is not symmetry-preserving");
}

}  // namespace detail

/// The sphere bound at a fixed level gamma for any code of size M.
template <class S>
BoundReport<S> metaconverse_at(const Channel<S>& ch, const OutputDistribution<S>& q,
                               std::uint64_t M, const ExtRatio<S>& gamma,
                               std::uint64_t budget = kDefaultBudget) {
  detail::require_symmetric_and_member(ch, q, budget);
  auto sp = spectrum(ch, q, 0, budget);
  BoundReport<S> rep;
  rep.name = "metaconverse_at";
  rep.raw = detail::sphere_bound_expression(sp, M, gamma);
  rep.value = detail::clip01(rep.raw);
  rep.witness["gamma"] = render_ext_ratio(gamma);
  rep.witness["M"] = std::to_string(M);
  return rep;
}

/// Meta-converse for a symmetric channel and a symmetry-preserving auxiliary
/// distribution: the sphere bound maximized over levels, which must equal the
/// optimal binary-test trade-off at beta = 1/M evaluated from any single
/// input row. Both routes are computed; in exact mode they are asserted
/// equal.
template <class S>
BoundReport<S> metaconverse_symmetric(const Channel<S>& ch, const OutputDistribution<S>& q,
                                      std::uint64_t M, std::uint64_t budget = kDefaultBudget) {
  detail::require_symmetric_and_member(ch, q, budget);
  auto sp = spectrum(ch, q, 0, budget);

  ExtRatio<S> best_gamma = ExtRatio<S>::zero();
  S best = detail::sphere_bound_expression(sp, M, best_gamma);
  for (const auto& lv : sp.levels) {
    if (lv.tau.inf) continue;
    S v = detail::sphere_bound_expression(sp, M, lv.tau);
    if (best < v) {
      best = std::move(v);
      best_gamma = lv.tau;
    }
  }

  // Independent route: the optimal test between an input row and Q.
  const auto row = output_law(ch, 0, budget);
  const S beta = num_traits<S>::one() / num_traits<S>::from_int(static_cast<long long>(M));
  const auto np = alpha_beta(row.p, q.p, beta);
  if constexpr (num_traits<S>::exact) {
    if (np.alpha != best)
      throw InternalError("meta-converse route disagreement: level scan vs binary test");
  }

  BoundReport<S> rep;
  rep.name = "metaconverse";
  rep.raw = best;
  rep.value = detail::clip01(best);
  rep.witness["gamma"] = render_ext_ratio(best_gamma);
  rep.witness["M"] = std::to_string(M);
  rep.witness["alpha_beta"] = render_scalar<S>(np.alpha);
  return rep;
}

// ---------------------------------------------------------------------------
// Closed forms for the erasure/error family.

/// Tilting table for binary-input channels: psi(e) =
/// max(0, floor((ceil(n - log2 M) - e + 1) / 2)), clamped into [0, n-e].
inline std::vector<int> psi_binary_default(unsigned n, std::uint64_t M) {
  if (M < 1) throw ConfigError("psi table needs M >= 1");
  int k = 0;
  while ((std::uint64_t{1} << (k + 1)) <= M) ++k;  // floor(log2 M)
  std::vector<int> psi(n + 1, 0);
  for (unsigned e = 0; e <= n; ++e) {
    const int t = static_cast<int>(n) - k - static_cast<int>(e) + 1;
    int v = t <= 0 ? 0 : t / 2;
    psi[e] = std::min(v, static_cast<int>(n - e));
  }
  return psi;
}

inline std::string psi_to_string(const std::vector<int>& psi) {
  std::string s;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i) s.push_back(';');
    s += std::to_string(psi[i]);
  }
  return s;
}

/// Closed-form lower bound for any size-M code on n uses of the
/// erasure/error channel, for a given tilting table psi:
/// sum_{e,d} C(n,e) C(n-e,d) (q-1)^d delta^e keep^(n-e)
///           (phi^max(d,psi(e)) - phi^psi(e)/M),  phi = flip/keep.
/// Exact big-integer binomials; no output-space enumeration.
template <class S>
BoundReport<S> erasure_error_bound(unsigned n, const ErasureErrorParams<S>& params,
                                   std::uint64_t M, const std::vector<int>& psi) {
  params.validate();
  validate_psi(n, psi);
  if (M < 1) throw ConfigError("bound needs M >= 1");
  const S keep = params.keep();
  const S phi = params.flip_each() / keep;
  const S inv_m = num_traits<S>::one() / num_traits<S>::from_int(static_cast<long long>(M));
  const BigInt qm1 = params.q - 1;

  Accum<S> total;
  for (unsigned e = 0; e <= n; ++e) {
    const S outer = num_traits<S>::from_rat(Rat(binomial(n, e))) *
                    pow_nat(params.delta, e) * pow_nat(keep, n - e);
    if (!(outer > num_traits<S>::zero())) continue;
    const unsigned pe = static_cast<unsigned>(psi[e]);
    const S phi_psi = pow_nat(phi, pe);
    Accum<S> inner;
    for (unsigned d = 0; d + e <= n; ++d) {
      const S count = num_traits<S>::from_rat(Rat(binomial(n - e, d) * pow_bigint(qm1, d)));
      inner.add(count * (pow_nat(phi, std::max(d, pe)) - phi_psi * inv_m));
    }
    total.add(outer * inner.total());
  }

  BoundReport<S> rep;
  rep.name = "erasure_error";
  rep.raw = total.total();
  rep.value = detail::clip01(rep.raw);
  rep.witness["psi"] = psi_to_string(psi);
  rep.witness["c"] = render_scalar<S>(erasure_aux_normalizer(n, params, psi));
  rep.witness["M"] = std::to_string(M);
  return rep;
}

/// Best integer tilting table, found by independent per-e scans over
/// psi(e) in [0, n-e] (the bound is separable across e); ties resolve to the
/// smallest exponent.
template <class S>
std::pair<std::vector<int>, BoundReport<S>> optimize_psi(unsigned n,
                                                         const ErasureErrorParams<S>& params,
                                                         std::uint64_t M) {
  params.validate();
  if (M < 1) throw ConfigError("bound needs M >= 1");
  const S keep = params.keep();
  const S phi = params.flip_each() / keep;
  const S inv_m = num_traits<S>::one() / num_traits<S>::from_int(static_cast<long long>(M));
  const BigInt qm1 = params.q - 1;

  std::vector<int> best_psi(n + 1, 0);
  for (unsigned e = 0; e <= n; ++e) {
    int best_p = 0;
    S best_term = num_traits<S>::zero();
    bool first = true;
    for (unsigned p = 0; p + e <= n; ++p) {
      const S phi_p = pow_nat(phi, p);
      Accum<S> inner;
      for (unsigned d = 0; d + e <= n; ++d) {
        const S count = num_traits<S>::from_rat(Rat(binomial(n - e, d) * pow_bigint(qm1, d)));
        inner.add(count * (pow_nat(phi, std::max(d, p)) - phi_p * inv_m));
      }
      if (first || best_term < inner.total()) {
        best_term = inner.total();
        best_p = static_cast<int>(p);
        first = false;
      }
    }
    best_psi[e] = best_p;
  }
  auto rep = erasure_error_bound(n, params, M, best_psi);
  return {std::move(best_psi), std::move(rep)};
}

/// Erasure-only lower bound (the eps -> 0 limit of the family):
/// sum_{e = floor(n - log_q M) + 1}^{n} C(n,e) delta^e (1-delta)^(n-e)
///   (1 - q^(n-e)/M).
template <class S>
BoundReport<S> mds_bound(unsigned n, int q, const S& delta, std::uint64_t M) {
  if (q < 2) throw ConfigError("mds_bound needs q >= 2");
  if (M < 1) throw ConfigError("mds_bound needs M >= 1");
  if (delta < num_traits<S>::zero() || delta > num_traits<S>::one())
    throw ConfigError("delta must lie in [0,1]");
  const S one = num_traits<S>::one();
  const S inv_m = one / num_traits<S>::from_int(static_cast<long long>(M));
  const BigInt big_m = static_cast<long long>(M);

  Accum<S> total;
  for (unsigned e = 0; e <= n; ++e) {
    // Contributes only above the MDS erasure-correction radius: q^(n-e) < M.
    if (pow_bigint(q, n - e) >= big_m) continue;
    S term = num_traits<S>::from_rat(Rat(binomial(n, e)));
    term *= pow_nat(delta, e);
    term *= pow_nat(one - delta, n - e);
    term *= one - num_traits<S>::from_rat(Rat(pow_bigint(q, n - e))) * inv_m;
    total.add(term);
  }

  BoundReport<S> rep;
  rep.name = "mds";
  rep.raw = total.total();
  rep.value = detail::clip01(rep.raw);
  rep.witness["M"] = std::to_string(M);
  return rep;
}

// ---------------------------------------------------------------------------
// Source-channel coding with message-dependent sphere scaling.

namespace detail {

/// Objective of the source-channel bound at a fixed scaled level gamma:
/// sum_v P(v) * [conditional mass at levels tau with P(v) tau <= gamma]
/// + gamma * sum_v [auxiliary mass at levels with P(v) tau > gamma] - gamma.
template <class S>
S jscc_expression(const RatioSpectrum<S>& sp, const std::vector<S>& pv, const S& gamma) {
  const S zero = num_traits<S>::zero();
  Accum<S> acc;
  for (const auto& v : pv) {
    if (!(v > zero)) continue;
    Accum<S> w_tail;
    Accum<S> q_above;
    for (const auto& lv : sp.levels) {
      if (lv.tau.inf) continue;  // carries no auxiliary mass
      if (v * lv.tau.v <= gamma)
        w_tail.add(lv.w_mass);
      else
        q_above.add(lv.q_mass);
    }
    acc.add(v * w_tail.total());
    acc.add(gamma * q_above.total());
  }
  return acc.total() - gamma;
}

}  // namespace detail

/// Lower bound on the MAP error probability of any source-channel code for
/// source pv over a symmetric channel, maximized over the scaled-level grid
/// {P(v) * tau} (the breakpoints of the piecewise-linear objective).
template <class S>
BoundReport<S> jscc_bound(const std::vector<S>& pv, const Channel<S>& ch,
                          const OutputDistribution<S>& q, std::uint64_t budget = kDefaultBudget) {
  detail::require_symmetric_and_member(ch, q, budget);
  {
    Accum<S> s;
    for (const auto& v : pv) {
      if (v < num_traits<S>::zero()) throw ConfigError("negative source mass");
      s.add(v);
    }
    if constexpr (num_traits<S>::exact) {
      if (s.total() != num_traits<S>::one()) throw ConfigError("source does not sum to 1");
    }
  }
  auto sp = spectrum(ch, q, 0, budget);

  S best_gamma = num_traits<S>::zero();
  S best = detail::jscc_expression(sp, pv, best_gamma);
  for (const auto& v : pv) {
    if (!(v > num_traits<S>::zero())) continue;
    for (const auto& lv : sp.levels) {
      if (lv.tau.inf) continue;
      S cand = v * lv.tau.v;
      S val = detail::jscc_expression(sp, pv, cand);
      if (best < val) {
        best = std::move(val);
        best_gamma = std::move(cand);
      }
    }
  }

  BoundReport<S> rep;
  rep.name = "jscc";
  rep.raw = best;
  rep.value = detail::clip01(best);
  rep.witness["gamma"] = render_scalar<S>(best_gamma);
  return rep;
}

/// Witness radii for the source-scaled sphere system: covering holds at
/// gamma <= eta and interior disjointness at gamma >= nu, with per-message
/// sphere levels gamma / P(v).
template <class S>
struct ScaledRadii {
  ExtRatio<S> eta;
  ExtRatio<S> nu;
};

template <class S>
ScaledRadii<S> jscc_radii(const Codebook& code, const std::vector<S>& pv, const Channel<S>& ch,
                          const OutputDistribution<S>& q, std::uint64_t budget = kDefaultBudget) {
  if (pv.size() != code.size())
    throw ConfigError("source alphabet size differs from codebook size");
  for (const auto& v : pv)
    if (!(v > num_traits<S>::zero()))
      throw ConfigError("witness radii need strictly positive message probabilities");
  auto rp = detail::scan_radii<S>(code.input_indices(), &pv, ch, q.p, budget);
  return {rp.eta, rp.nu};
}

/// Exact MAP error probability of a source-channel code that is
/// quasi-perfect with witness (gamma, Q): the source-channel objective at
/// gamma. The witness is verified through the scaled radii, and in exact
/// mode the value is asserted equal to the direct MAP computation.
template <class S>
S jscc_qp_error(const Codebook& code, const std::vector<S>& pv, const Channel<S>& ch,
                const OutputDistribution<S>& q, const S& gamma,
                std::uint64_t budget = kDefaultBudget) {
  detail::require_symmetric_and_member(ch, q, budget);
  auto radii = jscc_radii(code, pv, ch, q, budget);
  const ExtRatio<S> g = ExtRatio<S>::finite(gamma);
  if (g < radii.nu || radii.eta < g)
    throw HypothesisError("witness check failed: gamma outside [packing, covering] range");

  auto sp = spectrum(ch, q, 0, budget);
  S value = detail::jscc_expression(sp, pv, gamma);
  if constexpr (num_traits<S>::exact) {
    if (value != map_error_probability(code, pv, ch, budget))
      throw InternalError("source-channel error expression disagrees with MAP enumeration");
  }
  return value;
}

}  // namespace qpc
