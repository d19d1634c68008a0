#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "ciregions/pmf.hpp"
#include "ciregions/rates.hpp"

namespace ciregions {

/// Conditional law p_{U|X,Y} of an auxiliary variable, defined on the support
/// of a 2-variable pmf only; zero-probability (x,y) cells have no row.
struct ChannelRow {
  std::array<std::uint32_t, 2> idx;  // (x,y) symbol indices
  std::vector<double> p;             // distribution over U
};

struct AuxChannel {
  std::uint32_t u_size = 0;
  std::vector<ChannelRow> rows;  // sorted by idx, aligned with pmf support
};

/// Paper cardinality bound for the auxiliary alphabet.
inline std::uint32_t default_u_bound(const JointPMF& pmf) {
  return static_cast<std::uint32_t>(pmf.alphabet(0).size() * pmf.alphabet(1).size() + 2);
}

/// Checks row stochasticity and exact support coverage against the pmf.
inline void check_channel(const JointPMF& pmf, const AuxChannel& ch) {
  if (pmf.var_count() != 2) throw InvalidArgument("channels attach to 2-variable pmfs");
  if (ch.rows.size() != pmf.support_size())
    throw SupportMismatch("channel has " + std::to_string(ch.rows.size()) +
                          " rows, pmf support is " + std::to_string(pmf.support_size()));
  auto entries = pmf.entries();
  for (std::size_t i = 0; i < ch.rows.size(); ++i) {
    const auto& row = ch.rows[i];
    if (row.idx[0] != entries[i].idx[0] || row.idx[1] != entries[i].idx[1])
      throw SupportMismatch("channel row order does not match pmf support");
    if (row.p.size() != ch.u_size)
      throw InvalidArgument("channel row arity differs from u_size");
    KahanSum s;
    for (double v : row.p) {
      if (v < 0.0 || v > 1.0) throw InvalidArgument("channel entry outside [0,1]");
      s.add(v);
    }
    if (std::abs(s.value() - 1.0) > kRowTol)
      throw InvalidArgument("channel row does not sum to 1");
  }
}

/// U = constant.
inline AuxChannel constant_channel(const JointPMF& pmf) {
  AuxChannel ch;
  ch.u_size = 1;
  for (const auto& e : pmf.entries()) ch.rows.push_back({{e.idx[0], e.idx[1]}, {1.0}});
  return ch;
}

/// U = (X,Y): a distinct letter per support pair.
inline AuxChannel joint_letter_channel(const JointPMF& pmf) {
  AuxChannel ch;
  ch.u_size = static_cast<std::uint32_t>(pmf.support_size());
  std::uint32_t u = 0;
  for (const auto& e : pmf.entries()) {
    std::vector<double> row(ch.u_size, 0.0);
    row[u++] = 1.0;
    ch.rows.push_back({{e.idx[0], e.idx[1]}, std::move(row)});
  }
  return ch;
}

/// The induced joint p_{X,Y} * p_{U|X,Y} as a 3-variable pmf (X,Y,U).
inline JointPMF induced_joint(const JointPMF& pmf, const AuxChannel& ch) {
  check_channel(pmf, ch);
  Alphabet au;
  au.name = "U";
  au.symbols.reserve(ch.u_size);
  for (std::uint32_t u = 0; u < ch.u_size; ++u) au.symbols.push_back(std::to_string(u));
  std::vector<Alphabet> vars{pmf.alphabet(0), pmf.alphabet(1), std::move(au)};
  std::vector<PmfEntry> entries;
  auto src = pmf.entries();
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::uint32_t u = 0; u < ch.u_size; ++u) {
      double p = src[i].p * ch.rows[i].p[u];
      if (p > 0.0) entries.push_back({{src[i].idx[0], src[i].idx[1], u}, p});
    }
  }
  return JointPMF::validate(std::move(vars), std::move(entries));
}

/// ACI point of a channel: (I(Y;U|X), I(X;U|Y), I(X;Y|U)).
inline RateTriple aci_coordinates(const JointPMF& pmf, const AuxChannel& ch) {
  JointPMF j = induced_joint(pmf, ch);
  return RateTriple::aci(conditional_mutual_information(j, {1}, {2}, {0}),
                         conditional_mutual_information(j, {0}, {2}, {1}),
                         conditional_mutual_information(j, {0}, {1}, {2}));
}

/// Gray-Wyner point of a channel: (H(X|U), H(Y|U), I(X,Y;U)).
inline RateTriple gw_coordinates(const JointPMF& pmf, const AuxChannel& ch) {
  JointPMF j = induced_joint(pmf, ch);
  return RateTriple::gw(conditional_entropy(j, {0}, {2}),
                        conditional_entropy(j, {1}, {2}),
                        mutual_information(j, {0, 1}, {2}));
}

inline nlohmann::json aux_channel_to_json(const AuxChannel& ch) {
  nlohmann::json j;
  j["u_size"] = ch.u_size;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : ch.rows)
    j["rows"].push_back({{"idx", {row.idx[0], row.idx[1]}}, {"p", row.p}});
  return j;
}

inline AuxChannel aux_channel_from_json(const nlohmann::json& j) {
  AuxChannel ch;
  ch.u_size = j.at("u_size").get<std::uint32_t>();
  for (const auto& r : j.at("rows")) {
    ChannelRow row;
    row.idx = {r.at("idx")[0].get<std::uint32_t>(), r.at("idx")[1].get<std::uint32_t>()};
    row.p = r.at("p").get<std::vector<double>>();
    ch.rows.push_back(std::move(row));
  }
  std::sort(ch.rows.begin(), ch.rows.end(),
            [](const ChannelRow& a, const ChannelRow& b) { return a.idx < b.idx; });
  return ch;
}

}  // namespace ciregions
