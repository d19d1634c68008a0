#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ciregions/errors.hpp"

namespace ciregions {

inline constexpr double kMassTol = 1e-9;    // |sum-1| accepted on input
inline constexpr double kRowTol = 1e-12;    // row/total sum invariant
inline constexpr double kBitsClamp = 1e-9;  // floating-error window for information values

/// Clamps tiny negative information values (roundoff) to zero. A value below
/// the clamp window is treated as a bug, not noise.
inline double clamp_bits(double v) {
  if (v >= 0.0) return v;
  if (v >= -kBitsClamp) return 0.0;
  throw InternalConsistencyError("information value " + std::to_string(v) +
                                 " below clamp window");
}

/// Compensated (Neumaier) summation; keeps entropy identities tight on large
/// sparse supports.
class KahanSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Binary entropy in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct Alphabet {
  std::string name;
  std::vector<std::string> symbols;

  std::size_t size() const { return symbols.size(); }
};

using IndexTuple = std::array<std::uint32_t, 3>;

struct PmfEntry {
  IndexTuple idx;  // unused trailing variables are zero
  double p;
};

/// Sparse finite joint distribution over two or three named variables.
/// Immutable after validation; all operations are pure functions.
class JointPMF {
 public:
  static JointPMF validate(std::vector<Alphabet> vars,
                           std::vector<PmfEntry> raw_entries) {
    if (vars.size() < 2 || vars.size() > 3)
      throw InvalidArgument("JointPMF requires 2 or 3 variables");
    for (const auto& a : vars) {
      if (a.symbols.empty()) throw InvalidArgument("alphabet '" + a.name + "' is empty");
      auto sorted = a.symbols;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("alphabet '" + a.name + "' has duplicate symbols");
    }
    std::vector<PmfEntry> entries;
    entries.reserve(raw_entries.size());
    for (const auto& e : raw_entries) {
      for (std::size_t k = 0; k < 3; ++k) {
        std::size_t limit = k < vars.size() ? vars[k].size() : 1;
        if (e.idx[k] >= limit)
          throw InvalidArgument("entry index out of range for variable " + std::to_string(k));
      }
      if (e.p < 0.0)
        throw NegativeProbability("negative probability " + std::to_string(e.p));
      if (e.p > 0.0) entries.push_back(e);  // explicit zeros are dropped
    }
    std::sort(entries.begin(), entries.end(),
              [](const PmfEntry& a, const PmfEntry& b) { return a.idx < b.idx; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].idx == entries[i - 1].idx)
        throw DuplicateEntry("duplicate entry for a symbol tuple");
    }
    KahanSum mass;
    for (const auto& e : entries) mass.add(e.p);
    if (std::abs(mass.value() - 1.0) > kMassTol)
      throw MassNotOne("probabilities sum to " + std::to_string(mass.value()));
    return JointPMF(std::move(vars), std::move(entries));
  }

  std::size_t var_count() const { return vars_.size(); }
  const Alphabet& alphabet(std::size_t k) const { return vars_.at(k); }
  const std::vector<Alphabet>& alphabets() const { return vars_; }
  std::span<const PmfEntry> entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

  /// Packed key of an entry over a subset of variables (row-major in the
  /// order given by `subset`).
  std::uint64_t key_of(const IndexTuple& idx, std::span<const std::size_t> subset) const {
    std::uint64_t key = 0;
    for (std::size_t v : subset) key = key * vars_[v].size() + idx[v];
    return key;
  }

 private:
  JointPMF(std::vector<Alphabet> vars, std::vector<PmfEntry> entries)
      : vars_(std::move(vars)), entries_(std::move(entries)) {}

  std::vector<Alphabet> vars_;
  std::vector<PmfEntry> entries_;
};

namespace detail {

/// Marginal masses over a variable subset, as (packed key, mass) sorted by
/// key. Deterministic accumulation order.
inline std::vector<std::pair<std::uint64_t, double>> marginal_cells(
    const JointPMF& pmf, std::span<const std::size_t> subset) {
  std::vector<std::pair<std::uint64_t, double>> cells;
  cells.reserve(pmf.support_size());
  for (const auto& e : pmf.entries())
    cells.emplace_back(pmf.key_of(e.idx, subset), e.p);
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < cells.size();) {
    std::uint64_t k = cells[i].first;
    KahanSum s;
    while (i < cells.size() && cells[i].first == k) s.add(cells[i++].second);
    cells[out++] = {k, s.value()};
  }
  cells.resize(out);
  return cells;
}

inline void check_subset(const JointPMF& pmf, std::span<const std::size_t> subset) {
  if (subset.empty()) throw InvalidArgument("variable subset must be non-empty");
  for (std::size_t v : subset)
    if (v >= pmf.var_count()) throw InvalidArgument("variable index out of range");
}

inline std::vector<std::size_t> set_union(std::span<const std::size_t> a,
                                          std::span<const std::size_t> b) {
  std::vector<std::size_t> u(a.begin(), a.end());
  for (std::size_t v : b)
    if (std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
  std::sort(u.begin(), u.end());
  return u;
}

inline void check_disjoint(std::span<const std::size_t> a, std::span<const std::size_t> b,
                           const char* what) {
  for (std::size_t v : a)
    if (std::find(b.begin(), b.end(), v) != b.end())
      throw InvalidArgument(std::string("variable groups must be disjoint: ") + what);
}

}  // namespace detail

/// H(subset) in bits.
inline double entropy(const JointPMF& pmf, std::span<const std::size_t> subset) {
  detail::check_subset(pmf, subset);
  KahanSum h;
  for (const auto& [key, mass] : detail::marginal_cells(pmf, subset))
    h.add(entropy_term(mass));
  return clamp_bits(h.value());
}

inline double entropy(const JointPMF& pmf, std::initializer_list<std::size_t> subset) {
  std::vector<std::size_t> v(subset);
  return entropy(pmf, std::span<const std::size_t>(v));
}

/// H(target | given) = H(target,given) - H(given).
inline double conditional_entropy(const JointPMF& pmf,
                                  std::span<const std::size_t> target,
                                  std::span<const std::size_t> given) {
  detail::check_disjoint(target, given, "conditional_entropy");
  auto tg = detail::set_union(target, given);
  return clamp_bits(entropy(pmf, tg) - entropy(pmf, given));
}

inline double conditional_entropy(const JointPMF& pmf,
                                  std::initializer_list<std::size_t> target,
                                  std::initializer_list<std::size_t> given) {
  std::vector<std::size_t> t(target), g(given);
  return conditional_entropy(pmf, std::span<const std::size_t>(t),
                             std::span<const std::size_t>(g));
}

inline double mutual_information(const JointPMF& pmf,
                                 std::span<const std::size_t> a,
                                 std::span<const std::size_t> b) {
  detail::check_disjoint(a, b, "mutual_information");
  auto ab = detail::set_union(a, b);
  return clamp_bits(entropy(pmf, a) + entropy(pmf, b) - entropy(pmf, ab));
}

inline double mutual_information(const JointPMF& pmf,
                                 std::initializer_list<std::size_t> a,
                                 std::initializer_list<std::size_t> b) {
  std::vector<std::size_t> va(a), vb(b);
  return mutual_information(pmf, std::span<const std::size_t>(va),
                            std::span<const std::size_t>(vb));
}

/// I(a;b|g) = H(a,g) + H(b,g) - H(a,b,g) - H(g).
inline double conditional_mutual_information(const JointPMF& pmf,
                                             std::span<const std::size_t> a,
                                             std::span<const std::size_t> b,
                                             std::span<const std::size_t> g) {
  detail::check_disjoint(a, b, "cmi a/b");
  detail::check_disjoint(a, g, "cmi a/given");
  detail::check_disjoint(b, g, "cmi b/given");
  auto ag = detail::set_union(a, g);
  auto bg = detail::set_union(b, g);
  auto abg = detail::set_union(ag, b);
  return clamp_bits(entropy(pmf, ag) + entropy(pmf, bg) - entropy(pmf, abg) -
                    entropy(pmf, g));
}

inline double conditional_mutual_information(const JointPMF& pmf,
                                             std::initializer_list<std::size_t> a,
                                             std::initializer_list<std::size_t> b,
                                             std::initializer_list<std::size_t> g) {
  std::vector<std::size_t> va(a), vb(b), vg(g);
  return conditional_mutual_information(pmf, std::span<const std::size_t>(va),
                                        std::span<const std::size_t>(vb),
                                        std::span<const std::size_t>(vg));
}

/// Marginal distribution over `keep` (result variables in the given order).
inline JointPMF marginalize(const JointPMF& pmf, std::span<const std::size_t> keep) {
  detail::check_subset(pmf, keep);
  if (keep.size() > 3) throw InvalidArgument("marginalize: too many variables kept");
  std::vector<Alphabet> vars;
  for (std::size_t v : keep) vars.push_back(pmf.alphabet(v));
  std::vector<std::uint64_t> strides(keep.size(), 1);
  for (std::size_t k = keep.size(); k-- > 1;)
    for (std::size_t j = 0; j < k; ++j) strides[j] *= pmf.alphabet(keep[k]).size();
  std::vector<PmfEntry> out;
  for (const auto& [key, mass] : detail::marginal_cells(pmf, keep)) {
    IndexTuple idx{0, 0, 0};
    std::uint64_t rem = key;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      idx[k] = static_cast<std::uint32_t>(rem / strides[k]);
      rem %= strides[k];
    }
    out.push_back({idx, mass});
  }
  if (vars.size() < 2) vars.push_back(Alphabet{"1", {"*"}});  // stay in-type
  return JointPMF::validate(std::move(vars), std::move(out));
}

inline JointPMF marginalize(const JointPMF& pmf, std::initializer_list<std::size_t> keep) {
  std::vector<std::size_t> v(keep);
  return marginalize(pmf, std::span<const std::size_t>(v));
}

/// Conditions on {var = symbol}; the conditioned variable is dropped and the
/// remainder renormalized.
inline JointPMF condition(const JointPMF& pmf, std::size_t var, std::uint32_t symbol) {
  if (var >= pmf.var_count()) throw InvalidArgument("condition: bad variable index");
  if (symbol >= pmf.alphabet(var).size())
    throw InvalidArgument("condition: bad symbol index");
  KahanSum mass;
  for (const auto& e : pmf.entries())
    if (e.idx[var] == symbol) mass.add(e.p);
  double m = mass.value();
  if (m <= 0.0) throw ZeroMassConditioning("conditioning event has zero mass");
  std::vector<Alphabet> vars;
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < pmf.var_count(); ++v)
    if (v != var) {
      vars.push_back(pmf.alphabet(v));
      keep.push_back(v);
    }
  if (vars.size() < 2) {
    // A 2-variable pmf conditions down to a single variable; represent it as
    // a degenerate two-variable pmf over (kept, unit) to stay in-type.
    vars.push_back(Alphabet{"1", {"*"}});
  }
  std::vector<PmfEntry> out;
  for (const auto& e : pmf.entries()) {
    if (e.idx[var] != symbol) continue;
    IndexTuple idx{0, 0, 0};
    for (std::size_t k = 0; k < keep.size(); ++k) idx[k] = e.idx[keep[k]];
    out.push_back({idx, e.p / m});
  }
  return JointPMF::validate(std::move(vars), std::move(out));
}

/// Product distribution of two 2-variable pmfs with grouped compound
/// alphabets: ((X1,X2),(Y1,Y2)). Compound symbol labels join the factor
/// labels with '|'.
inline JointPMF independent_join(const JointPMF& a, const JointPMF& b) {
  if (a.var_count() != 2 || b.var_count() != 2)
    throw InvalidArgument("independent_join expects two 2-variable pmfs");
  auto compound = [](const Alphabet& u, const Alphabet& v) {
    Alphabet c;
    c.name = u.name + v.name;
    c.symbols.reserve(u.size() * v.size());
    for (const auto& su : u.symbols)
      for (const auto& sv : v.symbols) c.symbols.push_back(su + "|" + sv);
    return c;
  };
  std::vector<Alphabet> vars{compound(a.alphabet(0), b.alphabet(0)),
                             compound(a.alphabet(1), b.alphabet(1))};
  std::vector<PmfEntry> out;
  out.reserve(a.support_size() * b.support_size());
  const auto nbx = static_cast<std::uint32_t>(b.alphabet(0).size());
  const auto nby = static_cast<std::uint32_t>(b.alphabet(1).size());
  for (const auto& ea : a.entries())
    for (const auto& eb : b.entries())
      out.push_back({{ea.idx[0] * nbx + eb.idx[0], ea.idx[1] * nby + eb.idx[1], 0},
                     ea.p * eb.p});
  return JointPMF::validate(std::move(vars), std::move(out));
}

/// Swaps the two variables of a 2-variable pmf.
inline JointPMF swap_variables(const JointPMF& pmf) {
  if (pmf.var_count() != 2) throw InvalidArgument("swap_variables expects a 2-variable pmf");
  std::vector<Alphabet> vars{pmf.alphabet(1), pmf.alphabet(0)};
  std::vector<PmfEntry> out;
  out.reserve(pmf.support_size());
  for (const auto& e : pmf.entries()) out.push_back({{e.idx[1], e.idx[0], 0}, e.p});
  return JointPMF::validate(std::move(vars), std::move(out));
}

}  // namespace ciregions
