#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ciregions/channel.hpp"
#include "ciregions/parallel.hpp"
#include "ciregions/pmf.hpp"
#include "ciregions/rates.hpp"
#include "ciregions/rng.hpp"

namespace ciregions {

/// The six per-channel coordinates the searches can combine.
enum class Coord {
  aci_r1,  // I(Y;U|X)
  aci_r2,  // I(X;U|Y)
  aci_rd,  // I(X;Y|U)
  gw_a,    // H(X|U)
  gw_b,    // H(Y|U)
  ixyu,    // I(X,Y;U)
};

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 2000;
  double step_init = 1.0;    // relative step for the multiplicative update
  double step_grow = 2.0;
  double step_cap = 4.0;
  double tolerance = 1e-9;   // stop when per-sweep improvement falls below this
  std::uint64_t seed = 0;
  enum class Mode { local_search, grid } mode = Mode::local_search;
  std::uint32_t u_size = 0;  // 0 means the |X||Y|+2 bound
  double feas_tol = 1e-6;    // constraint acceptance level
  double mu_init = 10.0;
  double mu_max = 1e12;      // continuation extends by x10 until feasible or capped
  int kicks = 3;             // perturbation retries per stage when infeasible
  double grid_step = 0.05;   // used in grid mode
};

inline std::string config_hash(const OptimizerConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
  };
  auto mixd = [&](double d) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    mix(bits);
  };
  mix(static_cast<std::uint64_t>(c.restarts));
  mix(static_cast<std::uint64_t>(c.max_iters));
  mixd(c.step_init);
  mixd(c.tolerance);
  mix(c.seed);
  mix(static_cast<std::uint64_t>(c.u_size));
  mixd(c.feas_tol);
  mixd(c.mu_max);
  mix(static_cast<std::uint64_t>(c.kicks));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace detail {

/// Compact view of a 2-variable pmf for the inner loops: support cells with
/// dense-reindexed marginals.
struct SupportView {
  std::vector<double> p;
  std::vector<std::uint32_t> xi, yi;  // dense x/y index per support cell
  std::vector<std::array<std::uint32_t, 2>> sym;  // original symbol indices
  std::uint32_t nx = 0, ny = 0;
  double hx = 0, hy = 0, hxy = 0;

  static SupportView of(const JointPMF& pmf) {
    if (pmf.var_count() != 2) throw InvalidArgument("SupportView expects a 2-variable pmf");
    SupportView sv;
    std::vector<std::uint32_t> xmap(pmf.alphabet(0).size(), 0xFFFFFFFFu);
    std::vector<std::uint32_t> ymap(pmf.alphabet(1).size(), 0xFFFFFFFFu);
    for (const auto& e : pmf.entries()) {
      if (xmap[e.idx[0]] == 0xFFFFFFFFu) xmap[e.idx[0]] = sv.nx++;
      if (ymap[e.idx[1]] == 0xFFFFFFFFu) ymap[e.idx[1]] = sv.ny++;
      sv.p.push_back(e.p);
      sv.xi.push_back(xmap[e.idx[0]]);
      sv.yi.push_back(ymap[e.idx[1]]);
      sv.sym.push_back({e.idx[0], e.idx[1]});
    }
    std::vector<double> px(sv.nx, 0.0), py(sv.ny, 0.0);
    KahanSum hxy;
    for (std::size_t i = 0; i < sv.p.size(); ++i) {
      px[sv.xi[i]] += sv.p[i];
      py[sv.yi[i]] += sv.p[i];
      hxy.add(entropy_term(sv.p[i]));
    }
    KahanSum hx, hy;
    for (double v : px) hx.add(entropy_term(v));
    for (double v : py) hy.add(entropy_term(v));
    sv.hx = hx.value();
    sv.hy = hy.value();
    sv.hxy = hxy.value();
    return sv;
  }
};

/// Coefficients of a coordinate on the four channel-dependent entropies
/// (H(U), H(X,U), H(Y,U), H(X,Y,U)) plus a constant.
struct CoordCoef {
  double a, b, c, d, k;
};

inline CoordCoef coord_coef(Coord which, const SupportView& sv) {
  switch (which) {
    case Coord::aci_r1: return {0, 1, 0, -1, sv.hxy - sv.hx};
    case Coord::aci_r2: return {0, 0, 1, -1, sv.hxy - sv.hy};
    case Coord::aci_rd: return {-1, 1, 1, -1, 0};
    case Coord::gw_a:   return {-1, 1, 0, 0, 0};
    case Coord::gw_b:   return {-1, 0, 1, 0, 0};
    case Coord::ixyu:   return {1, 0, 0, -1, sv.hxy};
  }
  throw InvalidArgument("bad coord");
}

/// Channel state and the induced entropies, reused across iterations.
class Engine {
 public:
  Engine(const SupportView& sv, std::uint32_t u) : sv_(sv), u_(u) {
    pu_.resize(u_);
    pxu_.resize(static_cast<std::size_t>(sv_.nx) * u_);
    pyu_.resize(static_cast<std::size_t>(sv_.ny) * u_);
  }

  std::size_t rows() const { return sv_.p.size(); }
  std::uint32_t u() const { return u_; }

  /// Induced entropies (H(U), H(X,U), H(Y,U), H(X,Y,U)) of a channel.
  std::array<double, 4> entropies(const std::vector<double>& C) {
    std::fill(pu_.begin(), pu_.end(), 0.0);
    std::fill(pxu_.begin(), pxu_.end(), 0.0);
    std::fill(pyu_.begin(), pyu_.end(), 0.0);
    KahanSum d;
    for (std::size_t i = 0; i < rows(); ++i) {
      const double pi = sv_.p[i];
      const double* row = &C[i * u_];
      double* px = &pxu_[sv_.xi[i] * u_];
      double* py = &pyu_[sv_.yi[i] * u_];
      for (std::uint32_t k = 0; k < u_; ++k) {
        double m = pi * row[k];
        pu_[k] += m;
        px[k] += m;
        py[k] += m;
        d.add(entropy_term(m));
      }
    }
    KahanSum a, b, c;
    for (double v : pu_) a.add(entropy_term(v));
    for (double v : pxu_) b.add(entropy_term(v));
    for (double v : pyu_) c.add(entropy_term(v));
    return {a.value(), b.value(), c.value(), d.value()};
  }

  double coord_value(const CoordCoef& cc, const std::array<double, 4>& e) const {
    return cc.a * e[0] + cc.b * e[1] + cc.c * e[2] + cc.d * e[3] + cc.k;
  }

  /// Gradient of sum(coef_i * entropy_i) w.r.t. channel entries, assuming
  /// `entropies` was just called on C. Uniform per-row shifts are dropped by
  /// the multiplicative update, so additive constants are omitted.
  void gradient(const std::vector<double>& C, double ga, double gb, double gc, double gd,
                std::vector<double>& G) const {
    constexpr double kTiny = 1e-300;
    G.resize(C.size());
    for (std::size_t i = 0; i < rows(); ++i) {
      const double pi = sv_.p[i];
      const double* row = &C[i * u_];
      const double* px = &pxu_[sv_.xi[i] * u_];
      const double* py = &pyu_[sv_.yi[i] * u_];
      double* g = &G[i * u_];
      for (std::uint32_t k = 0; k < u_; ++k) {
        g[k] = -(ga * std::log2(pu_[k] + kTiny) + gb * std::log2(px[k] + kTiny) +
                 gc * std::log2(py[k] + kTiny) + gd * std::log2(pi * row[k] + kTiny));
      }
    }
  }

  const SupportView& view() const { return sv_; }

 private:
  const SupportView& sv_;
  std::uint32_t u_;
  std::vector<double> pu_, pxu_, pyu_;
};

struct PenaltyProblem {
  std::vector<std::pair<CoordCoef, double>> objective;  // (coord, weight)
  std::vector<CoordCoef> constraints;                   // driven to zero
};

struct StageResult {
  double total = 0.0;
  double value = 0.0;
  std::vector<double> cons;
};

/// One penalty stage: multiplicative (exponentiated-gradient) updates with a
/// backtracking step, until improvement drops below tol or iters run out.
inline StageResult run_stage(Engine& eng, const PenaltyProblem& prob, double mu,
                             std::vector<double>& C, const OptimizerConfig& cfg) {
  auto eval = [&](const std::vector<double>& ch, std::array<double, 4>& ent) {
    ent = eng.entropies(ch);
    StageResult r;
    KahanSum v;
    for (const auto& [cc, w] : prob.objective) v.add(w * eng.coord_value(cc, ent));
    r.value = v.value();
    r.total = r.value;
    for (const auto& cc : prob.constraints) {
      double c = std::max(eng.coord_value(cc, ent), 0.0);
      r.cons.push_back(c);
      r.total += mu * c * c;
    }
    return r;
  };

  std::array<double, 4> ent;
  StageResult cur = eval(C, ent);
  std::vector<double> G, cand(C.size());
  double eta = cfg.step_init;
  for (int it = 0; it < cfg.max_iters; ++it) {
    // combine objective and penalty coefficients on the four entropies
    double ga = 0, gb = 0, gc = 0, gd = 0;
    for (const auto& [cc, w] : prob.objective) {
      ga += w * cc.a; gb += w * cc.b; gc += w * cc.c; gd += w * cc.d;
    }
    for (std::size_t j = 0; j < prob.constraints.size(); ++j) {
      const auto& cc = prob.constraints[j];
      double w = 2.0 * mu * cur.cons[j];
      ga += w * cc.a; gb += w * cc.b; gc += w * cc.c; gd += w * cc.d;
    }
    eng.gradient(C, ga, gb, gc, gd, G);
    // center per row and normalize by the largest magnitude
    double gmax = 0.0;
    for (std::size_t i = 0; i < eng.rows(); ++i) {
      double* g = &G[i * eng.u()];
      double mean = 0.0;
      for (std::uint32_t k = 0; k < eng.u(); ++k) mean += g[k];
      mean /= eng.u();
      for (std::uint32_t k = 0; k < eng.u(); ++k) {
        g[k] -= mean;
        gmax = std::max(gmax, std::abs(g[k]));
      }
    }
    if (gmax < 1e-15) break;
    bool improved = false;
    while (eta >= 1e-9) {
      const double scale = eta / gmax;
      for (std::size_t i = 0; i < eng.rows(); ++i) {
        const double* row = &C[i * eng.u()];
        const double* g = &G[i * eng.u()];
        double* out = &cand[i * eng.u()];
        double sum = 0.0;
        for (std::uint32_t k = 0; k < eng.u(); ++k) {
          out[k] = row[k] * std::exp(-scale * g[k]);
          sum += out[k];
        }
        for (std::uint32_t k = 0; k < eng.u(); ++k) out[k] /= sum;
      }
      StageResult next = eval(cand, ent);
      if (next.total < cur.total - cfg.tolerance) {
        C.swap(cand);
        cur = next;
        improved = true;
        eta = std::min(eta * cfg.step_grow, cfg.step_cap);
        break;
      }
      eta *= 0.5;  // halve on non-improvement
    }
    if (!improved) break;
  }
  // recompute so cons/value match the accepted channel exactly
  return eval(C, ent);
}

inline StageResult run_restart(const Engine& proto, const PenaltyProblem& prob,
                               const OptimizerConfig& cfg, std::uint64_t restart_seed,
                               bool uniform_init, std::vector<double>& C) {
  Engine eng(proto.view(), proto.u());
  Rng rng(restart_seed);
  const std::size_t n = eng.rows();
  C.assign(n * eng.u(), 0.0);
  if (uniform_init) {
    std::fill(C.begin(), C.end(), 1.0 / eng.u());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      auto row = rng.next_simplex(eng.u());
      std::copy(row.begin(), row.end(), C.begin() + i * eng.u());
    }
  }
  StageResult res;
  double mu = cfg.mu_init;
  const bool constrained = !prob.constraints.empty();
  while (true) {
    res = run_stage(eng, prob, mu, C, cfg);
    if (constrained) {
      // Perturbation kicks: the uniform channel is a zero-gradient saddle of
      // every MI constraint, so a converged-but-infeasible iterate may just
      // be stuck there.
      int kicks = cfg.kicks;
      while (kicks-- > 0 &&
             *std::max_element(res.cons.begin(), res.cons.end()) > cfg.feas_tol) {
        std::vector<double> K(C.size());
        for (std::size_t i = 0; i < n; ++i) {
          double sum = 0.0;
          for (std::uint32_t k = 0; k < eng.u(); ++k) {
            K[i * eng.u() + k] =
                C[i * eng.u() + k] * std::exp(0.2 * rng.next_gaussian());
            sum += K[i * eng.u() + k];
          }
          for (std::uint32_t k = 0; k < eng.u(); ++k) K[i * eng.u() + k] /= sum;
        }
        StageResult kicked = run_stage(eng, prob, mu, K, cfg);
        if (kicked.total < res.total - cfg.tolerance) {
          C.swap(K);
          res = kicked;
        } else {
          break;
        }
      }
    }
    if (!constrained) break;
    double worst = *std::max_element(res.cons.begin(), res.cons.end());
    if (worst <= cfg.feas_tol * 1e-3 || mu >= cfg.mu_max) break;
    mu *= 10.0;
  }
  return res;
}

inline AuxChannel channel_from_matrix(const SupportView& sv, std::uint32_t u,
                                      const std::vector<double>& C) {
  AuxChannel ch;
  ch.u_size = u;
  for (std::size_t i = 0; i < sv.p.size(); ++i) {
    ChannelRow row;
    row.idx = sv.sym[i];
    row.p.assign(C.begin() + i * u, C.begin() + (i + 1) * u);
    ch.rows.push_back(std::move(row));
  }
  return ch;
}

}  // namespace detail

struct SearchResult {
  double value = 0.0;
  AuxChannel witness;
  bool converged = true;           // best restart reached its stop criterion
  std::vector<double> constraint_values;
  int best_restart = 0;
};

namespace detail {

inline SearchResult multi_restart(const JointPMF& pmf, const PenaltyProblem& prob,
                                  const OptimizerConfig& cfg) {
  SupportView sv = SupportView::of(pmf);
  std::uint32_t u = cfg.u_size ? cfg.u_size : default_u_bound(pmf);
  Engine proto(sv, u);
  const int R = std::max(cfg.restarts, 1);
  std::vector<StageResult> results(R);
  std::vector<std::vector<double>> channels(R);
  parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
    // Restart 0 starts from the uniform (constant-U) channel; the rest draw
    // Dirichlet(1) rows.
    results[r] = run_restart(proto, prob, cfg, derive_seed(cfg.seed, r), r == 0,
                             channels[r]);
  });
  // Deterministic merge: feasible results first, then value, then restart index.
  int best = -1;
  auto key = [&](int r) {
    bool feas = true;
    for (double c : results[r].cons) feas = feas && c <= cfg.feas_tol;
    return std::make_pair(!feas, results[r].value);
  };
  for (int r = 0; r < R; ++r)
    if (best < 0 || key(r) < key(best)) best = r;
  SearchResult out;
  out.value = results[best].value;
  out.witness = channel_from_matrix(sv, u, channels[best]);
  out.constraint_values = results[best].cons;
  out.best_restart = best;
  return out;
}

}  // namespace detail

inline const Coord kAciCoords[3] = {Coord::aci_r1, Coord::aci_r2, Coord::aci_rd};
inline const Coord kGwCoords[3] = {Coord::gw_a, Coord::gw_b, Coord::ixyu};

/// Minimizes w . coords over auxiliary channels; coords are the ACI or GW
/// triple. Returns the best value found and its witness channel. (Grid mode
/// is dispatched by the callers through brute_force_grid.)
inline SearchResult scalarized_search(const JointPMF& pmf, const Weights3& w,
                                      CoordTag coords, const OptimizerConfig& cfg) {
  detail::SupportView sv = detail::SupportView::of(pmf);
  detail::PenaltyProblem prob;
  for (int i = 0; i < 3; ++i) {
    if (w.w[i] == 0.0) continue;
    Coord c = coords == CoordTag::aci ? kAciCoords[i] : kGwCoords[i];
    prob.objective.push_back({detail::coord_coef(c, sv), w.w[i]});
  }
  return detail::multi_restart(pmf, prob, cfg);
}

/// Minimizes a single coordinate subject to other coordinates being zero,
/// via quadratic penalty with continuation. Throws OptimizerDidNotConverge
/// when no restart reaches feasibility `cfg.feas_tol`.
inline SearchResult penalized_search(const JointPMF& pmf, Coord objective,
                                     const std::vector<Coord>& constraints,
                                     const OptimizerConfig& cfg) {
  detail::SupportView sv = detail::SupportView::of(pmf);
  detail::PenaltyProblem prob;
  prob.objective.push_back({detail::coord_coef(objective, sv), 1.0});
  for (Coord c : constraints) prob.constraints.push_back(detail::coord_coef(c, sv));
  SearchResult res = detail::multi_restart(pmf, prob, cfg);
  for (double c : res.constraint_values)
    if (c > cfg.feas_tol)
      throw OptimizerDidNotConverge("constraint residual " + std::to_string(c) +
                                    " above feasibility tolerance");
  return res;
}

/// Same as penalized_search but with a multi-term objective.
inline SearchResult penalized_search_sum(const JointPMF& pmf,
                                         const std::vector<Coord>& objective_terms,
                                         const std::vector<Coord>& constraints,
                                         const OptimizerConfig& cfg) {
  detail::SupportView sv = detail::SupportView::of(pmf);
  detail::PenaltyProblem prob;
  for (Coord c : objective_terms)
    prob.objective.push_back({detail::coord_coef(c, sv), 1.0});
  for (Coord c : constraints) prob.constraints.push_back(detail::coord_coef(c, sv));
  SearchResult res = detail::multi_restart(pmf, prob, cfg);
  for (double c : res.constraint_values)
    if (c > cfg.feas_tol)
      throw OptimizerDidNotConverge("constraint residual " + std::to_string(c) +
                                    " above feasibility tolerance");
  return res;
}

}  // namespace ciregions
