#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ciregions/channel.hpp"
#include "ciregions/ot.hpp"
#include "ciregions/report.hpp"

namespace ciregions {

/// The eight free parameters of the appendix family: channels p_{Q|A,B} on
/// the bit-OT 8-cycle whose letters each live on one edge, so I(A;B|Q) = 0
/// holds identically. ptilde[i] is the appendix's p~_{i+1}.
struct BitOTClassParams {
  std::array<double, 8> ptilde{};
};

namespace detail {

/// One conditional-entropy term of the appendix expansion:
/// mass (a + 1 - b)/8 times H_2(a / (a + 1 - b)).
inline double bitot_term(double a, double b) {
  double w = a + 1.0 - b;
  if (w <= 0.0) return 0.0;
  return (w / 8.0) * binary_entropy(a / w);
}

/// Support edges of the bit-OT 8-cycle in pmf entry order, with the two
/// letters sharing each edge and the parameter that splits them:
/// p(first|edge) = ptilde[param], p(second|edge) = 1 - ptilde[param].
struct EdgeLetters {
  std::uint32_t first, second;  // Q letters (0-based: q1..q8 -> 0..7)
  std::uint32_t param;          // index into ptilde
};

inline const std::array<EdgeLetters, 8>& bitot_edges() {
  // Entry order of make_bit_ot(): (00,10) (00,20) (01,10) (01,21)
  //                               (10,11) (10,20) (11,11) (11,21)
  static const std::array<EdgeLetters, 8> edges = {{
      {0, 4, 0},  // (00,10): q1 / q5 split by p~1
      {7, 0, 7},  // (00,20): q8 / q1 split by p~8
      {4, 1, 4},  // (01,10): q5 / q2 split by p~5
      {1, 5, 1},  // (01,21): q2 / q6 split by p~2
      {6, 3, 6},  // (10,11): q7 / q4 split by p~7
      {3, 7, 3},  // (10,20): q4 / q8 split by p~4
      {2, 6, 2},  // (11,11): q3 / q7 split by p~3
      {5, 2, 5},  // (11,21): q6 / q3 split by p~6
  }};
  return edges;
}

}  // namespace detail

/// Closed-form H(A|Q,B) + H(B|Q,A) of the appendix expansion.
inline double bitot_sup_objective(const BitOTClassParams& p) {
  const auto& t = p.ptilde;
  double hb = detail::bitot_term(t[0], t[7]) + detail::bitot_term(t[1], t[4]) +
              detail::bitot_term(t[2], t[5]) + detail::bitot_term(t[3], t[6]);
  double ha = detail::bitot_term(t[4], t[0]) + detail::bitot_term(t[5], t[1]) +
              detail::bitot_term(t[6], t[2]) + detail::bitot_term(t[7], t[3]);
  return ha + hb;
}

/// The two one-sided analytic bounds of the appendix.
inline double bitot_hb_bound(const BitOTClassParams& p) {
  double s = 4.0;
  for (int i = 0; i < 4; ++i) s += p.ptilde[i];
  for (int i = 4; i < 8; ++i) s -= p.ptilde[i];
  return s / 8.0;
}
inline double bitot_ha_bound(const BitOTClassParams& p) {
  return 1.0 - bitot_hb_bound(p);
}

inline double bitot_hb_value(const BitOTClassParams& p) {
  const auto& t = p.ptilde;
  return detail::bitot_term(t[0], t[7]) + detail::bitot_term(t[1], t[4]) +
         detail::bitot_term(t[2], t[5]) + detail::bitot_term(t[3], t[6]);
}
inline double bitot_ha_value(const BitOTClassParams& p) {
  const auto& t = p.ptilde;
  return detail::bitot_term(t[4], t[0]) + detail::bitot_term(t[5], t[1]) +
         detail::bitot_term(t[6], t[2]) + detail::bitot_term(t[7], t[3]);
}

/// The explicit channel of a parameter vector: eight letters, letter q_i
/// supported on the i-th edge of the cycle.
inline AuxChannel bitot_class_channel(const BitOTClassParams& p) {
  AuxChannel ch;
  ch.u_size = 8;
  JointPMF ab = make_bit_ot();
  auto entries = ab.entries();
  const auto& edges = detail::bitot_edges();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::vector<double> row(8, 0.0);
    double v = p.ptilde[edges[i].param];
    row[edges[i].first] = v;
    row[edges[i].second] = 1.0 - v;
    ch.rows.push_back({{entries[i].idx[0], entries[i].idx[1]}, std::move(row)});
  }
  return ch;
}

/// Generic-path evaluation of the same objective through the pmf machinery;
/// kept separate from the closed form so the two can cross-check each other.
inline double bitot_sup_objective_generic(const BitOTClassParams& p) {
  JointPMF ab = make_bit_ot();
  JointPMF j = induced_joint(ab, bitot_class_channel(p));
  return conditional_entropy(j, {0}, {1, 2}) + conditional_entropy(j, {1}, {0, 2});
}

struct BitOTSupResult {
  double value = 0.0;
  BitOTClassParams argmax;
  double grid_value = 0.0;  // before refinement
};

namespace detail {

// chain order of parameters around the coupling cycle: p~1 p~5 p~2 p~6 p~3 p~7 p~4 p~8
inline const std::array<int, 8> kChain = {0, 4, 1, 5, 2, 6, 3, 7};

/// Pair term between consecutive chain slots (wrapping). Walking the cycle
/// p~1 p~5 p~2 p~6 p~3 p~7 p~4 p~8, every edge term is T(next, cur): the
/// A-direction and B-direction terms alternate but keep this argument order.
inline double chain_term(int /*slot*/, double v_cur, double v_next) {
  return bitot_term(v_next, v_cur);
}

}  // namespace detail

/// Exact maximum of the objective over the uniform grid of step `grid_step`
/// on [0,1]^8. The objective decomposes into pairwise terms along one cycle
/// of parameters, so the grid maximum is computed by dynamic programming over
/// that cycle; the result equals full enumeration of the grid.
inline BitOTSupResult bitot_sup_grid_max(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.25))
    throw InvalidArgument("grid step must be in (0, 0.25]");
  const int m = static_cast<int>(std::lround(1.0 / grid_step));
  std::vector<double> g(m + 1);
  for (int i = 0; i <= m; ++i) g[i] = static_cast<double>(i) / m;
  const auto& chain = detail::kChain;

  double best = -1.0;
  std::array<int, 8> best_idx{};
  std::vector<double> dp(m + 1), ndp(m + 1);
  std::vector<std::vector<int>> parent(8, std::vector<int>(m + 1, 0));
  for (int root = 0; root <= m; ++root) {
    std::fill(dp.begin(), dp.end(), 0.0);
    for (int w = 0; w <= m; ++w)
      dp[w] = detail::chain_term(0, g[root], g[w]);  // slot 0: chain[0] -> chain[1]
    for (int slot = 1; slot < 7; ++slot) {
      for (int w2 = 0; w2 <= m; ++w2) {
        double bv = -1.0;
        int barg = 0;
        for (int w = 0; w <= m; ++w) {
          double v = dp[w] + detail::chain_term(slot, g[w], g[w2]);
          if (v > bv) {
            bv = v;
            barg = w;
          }
        }
        ndp[w2] = bv;
        parent[slot][w2] = barg;
      }
      dp.swap(ndp);
    }
    for (int w = 0; w <= m; ++w) {  // close the cycle: chain[7] -> chain[0]
      double v = dp[w] + detail::chain_term(7, g[w], g[root]);
      if (v > best) {
        best = v;
        best_idx[7] = w;
        best_idx[0] = root;
        for (int slot = 6; slot >= 1; --slot)
          best_idx[slot] = parent[slot][best_idx[slot + 1]];
      }
    }
  }
  BitOTSupResult r;
  r.value = r.grid_value = best;
  for (int k = 0; k < 8; ++k) r.argmax.ptilde[chain[k]] = g[best_idx[k]];
  return r;
}

/// Reference enumeration of the same grid maximum; only viable for coarse
/// steps (used to validate the DP in tests).
inline double bitot_sup_grid_naive(double grid_step) {
  const int m = static_cast<int>(std::lround(1.0 / grid_step));
  if (std::pow(m + 1.0, 8.0) > 2e6 + 1)
    throw BudgetExceeded("naive bit-OT grid too large");
  BitOTClassParams p;
  double best = -1.0;
  std::array<int, 8> ix{};
  while (true) {
    for (int k = 0; k < 8; ++k) p.ptilde[k] = static_cast<double>(ix[k]) / m;
    best = std::max(best, bitot_sup_objective(p));
    int k = 0;
    while (k < 8 && ++ix[k] > m) ix[k++] = 0;
    if (k == 8) break;
  }
  return best;
}

/// Grid stage plus coordinate-wise local refinement. Returns the sup
/// estimate; for the bit-OT family the analytic bound caps it at 1.
inline BitOTSupResult bit_ot_sup_oracle(double grid_step, double refine_step) {
  BitOTSupResult r = bitot_sup_grid_max(grid_step);
  double step = refine_step;
  double cur = r.value;
  auto& pt = r.argmax.ptilde;
  while (step > 1e-6) {
    bool improved = false;
    for (int k = 0; k < 8; ++k) {
      for (double sgn : {1.0, -1.0}) {
        double saved = pt[k];
        pt[k] = std::min(1.0, std::max(0.0, pt[k] + sgn * step));
        double v = bitot_sup_objective(r.argmax);
        if (v > cur + 1e-14) {
          cur = v;
          improved = true;
        } else {
          pt[k] = saved;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  r.value = cur;
  return r;
}

/// Lemma-level sum-rate at the RD=0 face for the bit-OT pair: per-OT minimum
/// sum-rate H(A|B)+H(B|A) - sup = 1, doubled by additivity of regions of
/// independent pairs. The sup value must be confirmed by the oracle run.
inline ScalarReport bit_ot_pair_min_sum_zero(const BitOTSupResult& oracle) {
  if (std::abs(oracle.value - 1.0) > 1e-3)
    throw OracleNotRun("bit-OT sup oracle value " + std::to_string(oracle.value) +
                       " does not confirm the analytic sup of 1");
  JointPMF ab = make_bit_ot();
  double cond_sum = conditional_entropy(ab, {0}, {1}) + conditional_entropy(ab, {1}, {0});
  ScalarReport r;
  r.value = 2.0 * (cond_sum - 1.0);
  r.certified = Certainty::exact;
  r.note = "per-OT min sum-rate = H(A|B)+H(B|A) - sup = " + std::to_string(cond_sum) +
           " - 1; doubled by additivity of independent pairs";
  return r;
}

}  // namespace ciregions
