#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ciregions/channel.hpp"

namespace ciregions {

/// How a reported scalar was established. Heuristic values are upper bounds
/// found by local search; exact values carry no optimizer dependence.
enum class Certainty { exact, heuristic_upper, heuristic };

inline const char* to_string(Certainty c) {
  switch (c) {
    case Certainty::exact: return "exact";
    case Certainty::heuristic_upper: return "heuristic-upper";
    default: return "heuristic";
  }
}

struct ScalarReport {
  double value = 0.0;
  Certainty certified = Certainty::heuristic;
  std::optional<AuxChannel> witness;
  std::uint64_t seed = 0;         // optimizer provenance; meaningless for exact values
  std::string config_hash;        // empty for exact values
  std::string note;               // derivation record, when one exists
};

inline nlohmann::json scalar_report_to_json(const ScalarReport& r) {
  nlohmann::json j;
  j["value"] = r.value;
  j["certified"] = to_string(r.certified);
  if (r.certified != Certainty::exact) {
    j["seed"] = r.seed;
    j["config_hash"] = r.config_hash;
  }
  if (r.witness) j["witness"] = aux_channel_to_json(*r.witness);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace ciregions
