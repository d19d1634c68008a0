#pragma once

#include <utility>

#include "ciregions/gk.hpp"
#include "ciregions/grid_oracle.hpp"
#include "ciregions/optimizer.hpp"
#include "ciregions/report.hpp"

namespace ciregions {

namespace detail {

inline ScalarReport heuristic_report(const SearchResult& res, const OptimizerConfig& cfg,
                                     Certainty certainty) {
  ScalarReport r;
  r.value = clamp_bits(res.value);
  r.certified = certainty;
  r.witness = res.witness;
  r.seed = cfg.seed;
  r.config_hash = config_hash(cfg);
  return r;
}

}  // namespace detail

/// Wyner common information estimate: inf I(X,Y;U) over channels making
/// X - U - Y a Markov chain. Heuristic upper bound; flagged exact only when
/// the I(X;Y) lower bound pins it (sandwich).
inline ScalarReport wyner_common_information(const JointPMF& pmf,
                                             const OptimizerConfig& cfg = {}) {
  if (cfg.mode == OptimizerConfig::Mode::grid) {
    auto g = brute_force_grid(pmf, cfg.u_size ? cfg.u_size : default_u_bound(pmf),
                              cfg.grid_step, {{Coord::ixyu, 1.0}}, {Coord::aci_rd});
    ScalarReport r;
    r.value = g.value;
    r.certified = Certainty::heuristic_upper;
    r.witness = g.witness;
    return r;
  }
  SearchResult res = penalized_search(pmf, Coord::ixyu, {Coord::aci_rd}, cfg);
  auto r = detail::heuristic_report(res, cfg, Certainty::heuristic_upper);
  double ixy = mutual_information(pmf, {0}, {1});
  if (r.value <= ixy + 1e-9) {
    // C_Wyner >= I(X;Y) always, so an estimate this low is pinned.
    r.certified = Certainty::exact;
    r.value = std::max(r.value, 0.0);
  }
  return r;
}

/// R_1-0: inf I(Y;U|X) subject to I(X;U|Y) = I(X;Y|U) = 0.
inline ScalarReport corner_rate_1(const JointPMF& pmf, const OptimizerConfig& cfg = {}) {
  SearchResult res =
      penalized_search(pmf, Coord::aci_r1, {Coord::aci_r2, Coord::aci_rd}, cfg);
  return detail::heuristic_report(res, cfg, Certainty::heuristic_upper);
}

/// R_2-0: inf I(X;U|Y) subject to I(Y;U|X) = I(X;Y|U) = 0.
inline ScalarReport corner_rate_2(const JointPMF& pmf, const OptimizerConfig& cfg = {}) {
  SearchResult res =
      penalized_search(pmf, Coord::aci_r2, {Coord::aci_r1, Coord::aci_rd}, cfg);
  return detail::heuristic_report(res, cfg, Certainty::heuristic_upper);
}

/// Sum-rate at the R_RD = 0 face: inf R_1 + R_2 with I(X;Y|U) = 0. By the
/// corollary to the affine map this equals C_Wyner - I(X;Y).
inline ScalarReport min_sum_at_rd_zero(const JointPMF& pmf,
                                       const OptimizerConfig& cfg = {}) {
  SearchResult res =
      penalized_search_sum(pmf, {Coord::aci_r1, Coord::aci_r2}, {Coord::aci_rd}, cfg);
  return detail::heuristic_report(res, cfg, Certainty::heuristic_upper);
}

/// G(Y->X) = I(X;Y) + R_1-0 and G(X->Y) = I(X;Y) + R_2-0; certification is
/// inherited from the corner estimates.
inline std::pair<ScalarReport, ScalarReport> g_rates(const JointPMF& pmf,
                                                     const OptimizerConfig& cfg = {}) {
  double ixy = mutual_information(pmf, {0}, {1});
  ScalarReport c1 = corner_rate_1(pmf, cfg);
  ScalarReport c2 = corner_rate_2(pmf, cfg);
  ScalarReport g1 = c1, g2 = c2;
  g1.value = ixy + c1.value;
  g2.value = ixy + c2.value;
  return {g1, g2};
}

}  // namespace ciregions
