#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "ciregions/pmf.hpp"
#include "ciregions/report.hpp"

namespace ciregions {

/// The Gacs-Korner common part of a 2-variable pmf: connected components of
/// the bipartite support graph. Symbols outside the support map to kNoComponent.
struct GKDecomposition {
  static constexpr std::uint32_t kNoComponent = 0xFFFFFFFFu;

  std::vector<std::uint32_t> component_of_x;
  std::vector<std::uint32_t> component_of_y;
  std::vector<double> component_mass;

  std::size_t component_count() const { return component_mass.size(); }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/// Union-find over the bipartite support graph; component ids are
/// canonicalized by the smallest x-index they contain.
inline GKDecomposition gk_decomposition(const JointPMF& pmf) {
  if (pmf.var_count() != 2) throw InvalidArgument("gk_decomposition expects a 2-variable pmf");
  const auto nx = static_cast<std::uint32_t>(pmf.alphabet(0).size());
  const auto ny = static_cast<std::uint32_t>(pmf.alphabet(1).size());
  detail::UnionFind uf(nx + ny);
  for (const auto& e : pmf.entries()) uf.unite(e.idx[0], nx + e.idx[1]);

  GKDecomposition d;
  d.component_of_x.assign(nx, GKDecomposition::kNoComponent);
  d.component_of_y.assign(ny, GKDecomposition::kNoComponent);
  // Roots in increasing order are roots of increasing smallest-x, because the
  // union keeps the smaller node id as root and x nodes precede y nodes.
  std::vector<std::uint32_t> root_to_id(nx + ny, GKDecomposition::kNoComponent);
  std::vector<KahanSum> masses;
  for (const auto& e : pmf.entries()) {
    std::uint32_t root = uf.find(e.idx[0]);
    if (root_to_id[root] == GKDecomposition::kNoComponent) {
      root_to_id[root] = static_cast<std::uint32_t>(masses.size());
      masses.emplace_back();
    }
    std::uint32_t id = root_to_id[root];
    d.component_of_x[e.idx[0]] = id;
    d.component_of_y[e.idx[1]] = id;
    masses[id].add(e.p);
  }
  d.component_mass.reserve(masses.size());
  for (auto& m : masses) d.component_mass.push_back(m.value());
  return d;
}

/// C_GK(X,Y): entropy of the common-part distribution. Exact by construction.
inline ScalarReport gk_common_information(const JointPMF& pmf) {
  auto d = gk_decomposition(pmf);
  KahanSum h;
  for (double m : d.component_mass) h.add(entropy_term(m));
  ScalarReport r;
  r.value = clamp_bits(h.value());
  r.certified = Certainty::exact;
  return r;
}

/// R_RD-0 = I(X;Y) - C_GK(X,Y). Exact.
inline ScalarReport residual_info_zero(const JointPMF& pmf) {
  ScalarReport r;
  r.value = clamp_bits(mutual_information(pmf, {0}, {1}) - gk_common_information(pmf).value);
  r.certified = Certainty::exact;
  return r;
}

}  // namespace ciregions
