#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ciregions/optimizer.hpp"
#include "ciregions/parallel.hpp"

namespace ciregions {

struct GridResult {
  double value = 0.0;
  AuxChannel witness;
  std::vector<double> constraint_values;
  std::uint64_t evaluations = 0;
};

namespace detail {

/// Direct evaluation of the six coordinates from the definitions. Written
/// separately from the search engine so the oracle stays an independent path.
class DirectEval {
 public:
  DirectEval(const SupportView& sv, std::uint32_t u) : sv_(sv), u_(u) {
    pu_.resize(u);
    pxu_.resize(static_cast<std::size_t>(sv.nx) * u);
    pyu_.resize(static_cast<std::size_t>(sv.ny) * u);
  }

  double coord(Coord which, const std::vector<const double*>& rows) {
    std::fill(pu_.begin(), pu_.end(), 0.0);
    std::fill(pxu_.begin(), pxu_.end(), 0.0);
    std::fill(pyu_.begin(), pyu_.end(), 0.0);
    double hxyu = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::uint32_t k = 0; k < u_; ++k) {
        double m = sv_.p[i] * rows[i][k];
        pu_[k] += m;
        pxu_[sv_.xi[i] * u_ + k] += m;
        pyu_[sv_.yi[i] * u_ + k] += m;
        hxyu += entropy_term(m);
      }
    }
    double hu = 0.0, hxu = 0.0, hyu = 0.0;
    for (double v : pu_) hu += entropy_term(v);
    for (double v : pxu_) hxu += entropy_term(v);
    for (double v : pyu_) hyu += entropy_term(v);
    switch (which) {
      case Coord::aci_r1: return hxu - sv_.hx - hxyu + sv_.hxy;
      case Coord::aci_r2: return hyu - sv_.hy - hxyu + sv_.hxy;
      case Coord::aci_rd: return hxu + hyu - hxyu - hu;
      case Coord::gw_a:   return hxu - hu;
      case Coord::gw_b:   return hyu - hu;
      case Coord::ixyu:   return hu + sv_.hxy - hxyu;
    }
    return 0.0;
  }

 private:
  const SupportView& sv_;
  std::uint32_t u_;
  std::vector<double> pu_, pxu_, pyu_;
};

/// All distributions over u letters with entries that are multiples of
/// 1/steps, i.e. compositions of `steps`.
inline std::vector<std::vector<double>> simplex_grid(std::uint32_t u, std::uint32_t steps) {
  std::vector<std::vector<double>> out;
  std::vector<std::uint32_t> cur(u, 0);
  // lexicographic enumeration of compositions
  auto emit = [&] {
    std::vector<double> row(u);
    for (std::uint32_t k = 0; k < u; ++k) row[k] = static_cast<double>(cur[k]) / steps;
    out.push_back(std::move(row));
  };
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t pos,
                                                              std::uint32_t left) {
    if (pos + 1 == u) {
      cur[pos] = left;
      emit();
      return;
    }
    for (std::uint32_t v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, steps);
  return out;
}

}  // namespace detail

/// Exhaustive minimization of a linear coordinate objective over per-row
/// simplex grids, optionally filtered to channels whose constraint
/// coordinates stay below `filter_tol`. With `refine_step` set, the best grid
/// candidates are polished by a derivative-free pattern search under penalty
/// continuation (same two-stage shape as the bit-OT appendix oracle); without
/// it the result is the exact minimum over the grid.
inline GridResult brute_force_grid(const JointPMF& pmf, std::uint32_t u_size,
                                   double grid_step,
                                   const std::vector<std::pair<Coord, double>>& objective,
                                   const std::vector<Coord>& constraints = {},
                                   double filter_tol = 1e-4,
                                   std::uint64_t budget = 100000000ull,
                                   std::optional<double> refine_step = std::nullopt) {
  if (grid_step <= 0.0 || grid_step > 1.0) throw InvalidArgument("bad grid step");
  detail::SupportView sv = detail::SupportView::of(pmf);
  const auto steps = static_cast<std::uint32_t>(std::lround(1.0 / grid_step));
  auto rows = detail::simplex_grid(u_size, steps);
  const std::size_t n = sv.p.size();
  const double total_log = n * std::log(static_cast<double>(rows.size()));
  if (total_log > std::log(static_cast<double>(budget)))
    throw BudgetExceeded("grid enumeration would need more than the evaluation budget");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= rows.size();

  struct Cand {
    double score = std::numeric_limits<double>::infinity();
    std::uint64_t flat = 0;
    bool valid = false;
  };
  // per-worker bests: [0] = filtered objective; [1..3] = penalized totals used
  // only as refinement starts
  const double start_mus[3] = {1e3, 1e4, 1e5};
  unsigned workers = std::max(1u, worker_count());
  std::vector<std::array<Cand, 4>> worker_best(workers);

  const std::uint64_t chunk = (total + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t w) {
    detail::DirectEval ev(sv, u_size);
    std::vector<const double*> ch(n);
    auto& best = worker_best[w];
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
    for (std::uint64_t flat = lo; flat < hi; ++flat) {
      std::uint64_t rem = flat;
      for (std::size_t i = 0; i < n; ++i) {
        ch[i] = rows[rem % rows.size()].data();
        rem /= rows.size();
      }
      double obj = 0.0;
      for (const auto& [c, wt] : objective) obj += wt * ev.coord(c, ch);
      double worst = 0.0;
      double pen2 = 0.0;
      for (Coord c : constraints) {
        double v = std::max(ev.coord(c, ch), 0.0);
        worst = std::max(worst, v);
        pen2 += v * v;
      }
      if (worst <= filter_tol && obj < best[0].score) best[0] = {obj, flat, true};
      for (int m = 0; m < 3; ++m) {
        double tot = obj + start_mus[m] * pen2;
        if (tot < best[m + 1].score) best[m + 1] = {tot, flat, true};
      }
    }
  });

  std::array<Cand, 4> best;
  for (const auto& wb : worker_best)
    for (int k = 0; k < 4; ++k)
      if (wb[k].valid && (!best[k].valid || wb[k].score < best[k].score ||
                          (wb[k].score == best[k].score && wb[k].flat < best[k].flat)))
        best[k] = wb[k];

  auto decode = [&](std::uint64_t flat) {
    std::vector<std::vector<double>> c(n);
    std::uint64_t rem = flat;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = rows[rem % rows.size()];
      rem /= rows.size();
    }
    return c;
  };
  auto eval_cons = [&](const std::vector<std::vector<double>>& c) {
    detail::DirectEval ev(sv, u_size);
    std::vector<const double*> ch(n);
    for (std::size_t i = 0; i < n; ++i) ch[i] = c[i].data();
    std::vector<double> vals;
    for (Coord cc : constraints) vals.push_back(std::max(ev.coord(cc, ch), 0.0));
    return vals;
  };
  auto eval_obj = [&](const std::vector<std::vector<double>>& c) {
    detail::DirectEval ev(sv, u_size);
    std::vector<const double*> ch(n);
    for (std::size_t i = 0; i < n; ++i) ch[i] = c[i].data();
    double obj = 0.0;
    for (const auto& [cc, wt] : objective) obj += wt * ev.coord(cc, ch);
    return obj;
  };

  GridResult out;
  out.evaluations = total;

  if (!refine_step) {
    if (!best[0].valid)
      throw OptimizerDidNotConverge("no grid channel satisfies the feasibility filter");
    auto c = decode(best[0].flat);
    out.value = best[0].score;
    out.constraint_values = eval_cons(c);
    AuxChannel ach;
    ach.u_size = u_size;
    for (std::size_t i = 0; i < n; ++i) ach.rows.push_back({sv.sym[i], c[i]});
    out.witness = ach;
    return out;
  }

  // Pattern-search refinement: pairwise mass transfers inside rows, step
  // halving, quadratic penalty escalated far enough that the residual has no
  // effect at the comparison tolerances.
  auto refine = [&](std::vector<std::vector<double>> c) {
    for (double mu : {1e4, 1e6, 1e8, 1e10, 1e12}) {
      auto total_at = [&](const std::vector<std::vector<double>>& x) {
        detail::DirectEval ev(sv, u_size);
        std::vector<const double*> ch(n);
        for (std::size_t i = 0; i < n; ++i) ch[i] = x[i].data();
        double obj = 0.0;
        for (const auto& [cc, wt] : objective) obj += wt * ev.coord(cc, ch);
        for (Coord cc : constraints) {
          double v = std::max(ev.coord(cc, ch), 0.0);
          obj += mu * v * v;
        }
        return obj;
      };
      double step = *refine_step;
      double f = total_at(c);
      while (step > 1e-8) {
        bool improved = false;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::uint32_t a = 0; a < u_size; ++a) {
            for (std::uint32_t b = 0; b < u_size; ++b) {
              if (a == b) continue;
              double d = std::min(step, c[i][a]);
              if (d <= 0.0) continue;
              c[i][a] -= d;
              c[i][b] += d;
              double fc = total_at(c);
              if (fc < f - 1e-14) {
                f = fc;
                improved = true;
              } else {
                c[i][a] += d;
                c[i][b] -= d;
              }
            }
          }
        }
        if (!improved) step *= 0.5;
      }
    }
    return c;
  };

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_ch;
  std::vector<double> best_cons;
  for (int k = 0; k < 4; ++k) {
    if (!best[k].valid) continue;
    auto c = refine(decode(best[k].flat));
    auto cons = eval_cons(c);
    double worst = cons.empty() ? 0.0 : *std::max_element(cons.begin(), cons.end());
    double obj = eval_obj(c);
    if (worst <= 1e-6 && obj < best_val) {
      best_val = obj;
      best_ch = std::move(c);
      best_cons = std::move(cons);
    }
  }
  if (best_ch.empty())
    throw OptimizerDidNotConverge("refinement did not reach feasibility");
  out.value = best_val;
  out.constraint_values = best_cons;
  AuxChannel ach;
  ach.u_size = u_size;
  for (std::size_t i = 0; i < n; ++i) ach.rows.push_back({sv.sym[i], best_ch[i]});
  out.witness = ach;
  return out;
}

}  // namespace ciregions
