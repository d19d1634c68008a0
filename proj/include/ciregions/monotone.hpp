#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ciregions/pmf.hpp"
#include "ciregions/rng.hpp"

namespace ciregions {

namespace detail {

/// Dense joint distribution over a small tuple of variables; just enough to
/// evaluate the information identities behind the monotone-step proofs, which
/// need more jointly represented variables than JointPMF carries.
struct TupleDist {
  std::vector<std::uint32_t> sizes;
  std::vector<double> p;  // row-major, last variable fastest

  std::size_t cells() const { return p.size(); }

  std::uint32_t digit(std::size_t flat, std::size_t var) const {
    std::size_t stride = 1;
    for (std::size_t k = sizes.size(); k-- > var + 1;) stride *= sizes[k];
    return static_cast<std::uint32_t>((flat / stride) % sizes[var]);
  }

  double subset_entropy(const std::vector<std::size_t>& vars) const {
    std::size_t n = 1;
    for (auto v : vars) n *= sizes[v];
    std::vector<double> m(n, 0.0);
    for (std::size_t f = 0; f < p.size(); ++f) {
      if (p[f] <= 0.0) continue;
      std::size_t key = 0;
      for (auto v : vars) key = key * sizes[v] + digit(f, v);
      m[key] += p[f];
    }
    KahanSum h;
    for (double v : m) h.add(entropy_term(v));
    return h.value();
  }

  double cmi(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
             const std::vector<std::size_t>& g) const {
    auto join = [](std::vector<std::size_t> u, const std::vector<std::size_t>& v) {
      for (auto x : v) u.push_back(x);
      std::sort(u.begin(), u.end());
      return u;
    };
    return subset_entropy(join(a, g)) + subset_entropy(join(b, g)) -
           subset_entropy(join(join(a, b), g)) - (g.empty() ? 0.0 : subset_entropy(g));
  }
};

inline std::vector<double> random_dist(Rng& rng, std::size_t n) {
  return rng.next_simplex(n);
}

}  // namespace detail

struct MonotoneCheckLine {
  std::string name;
  int trials = 0;
  double max_equality_deviation = 0.0;  // |lhs - rhs| over equality checks
  double min_inequality_slack = 0.0;    // min(lhs - rhs) over inequality checks
  bool pass = false;
};

struct MonotoneReport {
  std::vector<MonotoneCheckLine> lines;
  bool all_pass = true;
};

/// Verifies the information identities and inequalities behind the four
/// monotone steps of the region-inclusion proof, on random joints of the
/// stated factorized forms. Equalities must hold within `tol`, inequalities
/// with slack >= -tol.
inline MonotoneReport monotone_step_checks(std::uint64_t seed, int trials,
                                           double tol = 1e-9) {
  using detail::TupleDist;
  MonotoneReport report;

  auto start_line = [&](const std::string& name) {
    MonotoneCheckLine line;
    line.name = name;
    line.trials = trials;
    line.min_inequality_slack = std::numeric_limits<double>::infinity();
    return line;
  };
  auto finish_line = [&](MonotoneCheckLine line) {
    if (line.min_inequality_slack == std::numeric_limits<double>::infinity())
      line.min_inequality_slack = 0.0;
    line.pass = line.max_equality_deviation <= tol && line.min_inequality_slack >= -tol;
    report.all_pass = report.all_pass && line.pass;
    report.lines.push_back(std::move(line));
  };

  // (a) local computation: p(x,y) p(z|y) p(q|x,y)
  {
    auto line = start_line("step-a local computation (3 equalities)");
    Rng rng(derive_seed(seed, 0xa));
    for (int t = 0; t < trials; ++t) {
      TupleDist d;  // X Y Z Q
      d.sizes = {2, 2, 2, 2};
      d.p.assign(16, 0.0);
      auto pxy = detail::random_dist(rng, 4);
      std::vector<std::vector<double>> pz{detail::random_dist(rng, 2),
                                          detail::random_dist(rng, 2)};
      std::vector<std::vector<double>> pq{
          detail::random_dist(rng, 2), detail::random_dist(rng, 2),
          detail::random_dist(rng, 2), detail::random_dist(rng, 2)};
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int z = 0; z < 2; ++z)
            for (int q = 0; q < 2; ++q)
              d.p[((x * 2 + y) * 2 + z) * 2 + q] =
                  pxy[x * 2 + y] * pz[y][z] * pq[x * 2 + y][q];
      double e1 = std::abs(d.cmi({0}, {1, 2}, {3}) - d.cmi({0}, {1}, {3}));
      double e2 = std::abs(d.cmi({3}, {1, 2}, {0}) - d.cmi({3}, {1}, {0}));
      double e3 = std::abs(d.cmi({0}, {3}, {1, 2}) - d.cmi({0}, {3}, {1}));
      line.max_equality_deviation =
          std::max({line.max_equality_deviation, e1, e2, e3});
    }
    finish_line(std::move(line));
  }

  // (b) communication: (X, Y, Q, F=f(X))
  {
    auto line = start_line("step-b communication (3 equalities, 2 inequalities)");
    Rng rng(derive_seed(seed, 0xb));
    for (int t = 0; t < trials; ++t) {
      TupleDist d;  // X Y Q F
      d.sizes = {3, 2, 2, 2};
      d.p.assign(24, 0.0);
      auto pxy = detail::random_dist(rng, 6);
      std::vector<std::vector<double>> pq;
      for (int i = 0; i < 6; ++i) pq.push_back(detail::random_dist(rng, 2));
      // f cycles through constant, identity-ish, and random maps
      std::array<std::uint32_t, 3> f{};
      if (t % 3 == 0) {
        f = {0, 0, 0};
      } else if (t % 3 == 1) {
        f = {0, 1, 1};
      } else {
        for (auto& v : f) v = rng.next_below(2);
      }
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 2; ++y)
          for (int q = 0; q < 2; ++q)
            d.p[((x * 2 + y) * 2 + q) * 2 + f[x]] += pxy[x * 2 + y] * pq[x * 2 + y][q];
      double e1 = std::abs(d.cmi({0}, {1, 3}, {2, 3}) - d.cmi({0}, {1}, {2, 3}));
      double i1 = d.cmi({0}, {1}, {2}) - d.cmi({0}, {1}, {2, 3});
      double e2 = std::abs(d.cmi({0}, {2, 3}, {1, 3}) - d.cmi({0}, {2}, {1, 3}));
      double i2 = d.cmi({0}, {2}, {1}) - d.cmi({0}, {2}, {1, 3});
      double e3 = std::abs(d.cmi({1}, {2, 3}, {0}) - d.cmi({1}, {2}, {0}));
      line.max_equality_deviation = std::max({line.max_equality_deviation, e1, e2, e3});
      line.min_inequality_slack = std::min({line.min_inequality_slack, i1, i2});
    }
    finish_line(std::move(line));
  }

  // (c) securely derived outputs: X - U - V, U - V - Y, arbitrary Q
  {
    auto line = start_line("step-c derived outputs (3 inequalities)");
    Rng rng(derive_seed(seed, 0xc));
    for (int t = 0; t < trials; ++t) {
      TupleDist d;  // X U V Y Q
      d.sizes = {2, 2, 2, 2, 2};
      d.p.assign(32, 0.0);
      auto puv = detail::random_dist(rng, 4);
      std::vector<std::vector<double>> px{detail::random_dist(rng, 2),
                                          detail::random_dist(rng, 2)};
      std::vector<std::vector<double>> py{detail::random_dist(rng, 2),
                                          detail::random_dist(rng, 2)};
      bool degenerate = t % 4 == 0;  // X=U, Y=V reduces the bounds to equalities
      std::vector<std::vector<double>> pq;
      for (int i = 0; i < 16; ++i) pq.push_back(detail::random_dist(rng, 2));
      for (int x = 0; x < 2; ++x)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v)
            for (int y = 0; y < 2; ++y) {
              double mass = puv[u * 2 + v] * (degenerate ? (x == u ? 1.0 : 0.0) : px[u][x]) *
                            (degenerate ? (y == v ? 1.0 : 0.0) : py[v][y]);
              if (mass <= 0.0) continue;
              int cell = ((x * 2 + u) * 2 + v) * 2 + y;
              for (int q = 0; q < 2; ++q)
                d.p[cell * 2 + q] += mass * pq[cell][q];
            }
      double i1 = d.cmi({0, 1}, {2, 3}, {4}) - d.cmi({1}, {2}, {4});
      double i2 = d.cmi({0, 1}, {4}, {2, 3}) - d.cmi({1}, {4}, {2});
      double i3 = d.cmi({2, 3}, {4}, {0, 1}) - d.cmi({2}, {4}, {1});
      line.min_inequality_slack = std::min({line.min_inequality_slack, i1, i2, i3});
      if (degenerate)
        line.max_equality_deviation =
            std::max({line.max_equality_deviation, i1, i2, i3});
    }
    finish_line(std::move(line));
  }

  // (d) additivity: independent pairs with per-pair channels (equalities)
  {
    auto line = start_line("step-d additivity (3 equalities)");
    Rng rng(derive_seed(seed, 0xd));
    for (int t = 0; t < trials; ++t) {
      TupleDist d;  // X Y U V Q1 Q2
      d.sizes = {2, 2, 2, 2, 2, 2};
      d.p.assign(64, 0.0);
      auto pxy = detail::random_dist(rng, 4);
      auto puv = detail::random_dist(rng, 4);
      std::vector<std::vector<double>> pq1, pq2;
      for (int i = 0; i < 4; ++i) pq1.push_back(detail::random_dist(rng, 2));
      for (int i = 0; i < 4; ++i) pq2.push_back(detail::random_dist(rng, 2));
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v)
              for (int q1 = 0; q1 < 2; ++q1)
                for (int q2 = 0; q2 < 2; ++q2)
                  d.p[((((x * 2 + y) * 2 + u) * 2 + v) * 2 + q1) * 2 + q2] =
                      pxy[x * 2 + y] * puv[u * 2 + v] * pq1[x * 2 + y][q1] *
                      pq2[u * 2 + v][q2];
      double e1 = std::abs(d.cmi({0, 2}, {1, 3}, {4, 5}) -
                           (d.cmi({0}, {1}, {4}) + d.cmi({2}, {3}, {5})));
      double e2 = std::abs(d.cmi({0, 2}, {4, 5}, {1, 3}) -
                           (d.cmi({0}, {4}, {1}) + d.cmi({2}, {5}, {3})));
      double e3 = std::abs(d.cmi({1, 3}, {4, 5}, {0, 2}) -
                           (d.cmi({1}, {4}, {0}) + d.cmi({3}, {5}, {2})));
      line.max_equality_deviation = std::max({line.max_equality_deviation, e1, e2, e3});
    }
    finish_line(std::move(line));
  }

  // (d') joint channel over both pairs (inequalities)
  {
    auto line = start_line("step-d joint channel (3 inequalities)");
    Rng rng(derive_seed(seed, 0xe));
    for (int t = 0; t < trials; ++t) {
      TupleDist d;  // X Y U V Q
      d.sizes = {2, 2, 2, 2, 2};
      d.p.assign(32, 0.0);
      auto pxy = detail::random_dist(rng, 4);
      auto puv = detail::random_dist(rng, 4);
      std::vector<std::vector<double>> pq;
      for (int i = 0; i < 16; ++i) pq.push_back(detail::random_dist(rng, 2));
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) {
              int cell = ((x * 2 + y) * 2 + u) * 2 + v;
              for (int q = 0; q < 2; ++q)
                d.p[cell * 2 + q] =
                    pxy[x * 2 + y] * puv[u * 2 + v] * pq[cell][q];
            }
      double i1 = d.cmi({0, 2}, {1, 3}, {4}) -
                  (d.cmi({0}, {1}, {4}) + d.cmi({2}, {3}, {4}));
      double i2 = d.cmi({0, 2}, {4}, {1, 3}) -
                  (d.cmi({0}, {4}, {1}) + d.cmi({2}, {4}, {3}));
      double i3 = d.cmi({1, 3}, {4}, {0, 2}) -
                  (d.cmi({1}, {4}, {0}) + d.cmi({3}, {4}, {2}));
      line.min_inequality_slack = std::min({line.min_inequality_slack, i1, i2, i3});
    }
    finish_line(std::move(line));
  }

  if (!report.all_pass) {
    // Callers that need the detail still get the report via the exception-free
    // path; the throwing variant is in verify flows.
  }
  return report;
}

}  // namespace ciregions
