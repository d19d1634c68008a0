#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "ciregions/pmf.hpp"

namespace ciregions {

/// Parses the pmf schema:
///   {"variables":[{"name":"X","symbols":[...]},...],
///    "entries":[{"idx":[i,j],"p":0.125},...]}
/// Probabilities may also be exact rationals {"num":1,"den":8}.
inline JointPMF pmf_from_json(const nlohmann::json& j) {
  if (!j.contains("variables") || !j.contains("entries"))
    throw InvalidArgument("pmf json needs 'variables' and 'entries'");
  std::vector<Alphabet> vars;
  for (const auto& v : j.at("variables")) {
    Alphabet a;
    a.name = v.at("name").get<std::string>();
    for (const auto& s : v.at("symbols")) a.symbols.push_back(s.get<std::string>());
    vars.push_back(std::move(a));
  }
  std::vector<PmfEntry> entries;
  for (const auto& e : j.at("entries")) {
    PmfEntry pe{{0, 0, 0}, 0.0};
    const auto& idx = e.at("idx");
    if (idx.size() != vars.size())
      throw InvalidArgument("entry idx arity does not match variable count");
    for (std::size_t k = 0; k < idx.size(); ++k)
      pe.idx[k] = idx[k].get<std::uint32_t>();
    const auto& p = e.at("p");
    if (p.is_object()) {
      double den = p.at("den").get<double>();
      if (den == 0.0) throw InvalidArgument("rational probability with zero denominator");
      pe.p = p.at("num").get<double>() / den;
    } else {
      pe.p = p.get<double>();
    }
    entries.push_back(pe);
  }
  return JointPMF::validate(std::move(vars), std::move(entries));
}

inline nlohmann::json pmf_to_json(const JointPMF& pmf) {
  nlohmann::json j;
  j["variables"] = nlohmann::json::array();
  for (const auto& a : pmf.alphabets())
    j["variables"].push_back({{"name", a.name}, {"symbols", a.symbols}});
  j["entries"] = nlohmann::json::array();
  for (const auto& e : pmf.entries()) {
    nlohmann::json idx = nlohmann::json::array();
    for (std::size_t k = 0; k < pmf.var_count(); ++k) idx.push_back(e.idx[k]);
    j["entries"].push_back({{"idx", idx}, {"p", e.p}});
  }
  return j;
}

inline JointPMF load_pmf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open pmf file: " + path);
  nlohmann::json j;
  in >> j;
  return pmf_from_json(j);
}

}  // namespace ciregions
