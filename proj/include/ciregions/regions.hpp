#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ciregions/channel.hpp"
#include "ciregions/optimizer.hpp"
#include "ciregions/parallel.hpp"
#include "ciregions/rates.hpp"

namespace ciregions {

/// Inner approximation of a rate region: achieved points (with witness
/// channels) plus scalarization records. The represented set is the
/// increasing hull of the point cloud; no outer-boundary claim is made.
struct RegionApprox {
  struct Point {
    RateTriple t;
    AuxChannel witness;
    std::string source;  // "search:w1,w2,w3" or "analytic:..."
  };
  struct Scalarization {
    Weights3 w;
    double value = 0.0;
    std::size_t point_index = 0;  // cloud point attaining the value
  };

  CoordTag tag = CoordTag::aci;
  std::vector<Point> points;
  std::vector<Scalarization> scalarizations;
  double hx = 0.0, hy = 0.0, hxy = 0.0;  // source entropies for the affine map
};

/// Theorem-level affine map from GW coordinates to ACI coordinates:
/// (R_A+R_C-H(X), R_B+R_C-H(Y), R_A+R_B+R_C-H(X,Y)).
inline RateTriple affine_map_f(double hx, double hy, double hxy, const RateTriple& gw) {
  if (gw.tag != CoordTag::gw) throw TagMismatch("affine_map_f expects a GW triple");
  return RateTriple::aci(gw.r[0] + gw.r[2] - hx, gw.r[1] + gw.r[2] - hy,
                         gw.r[0] + gw.r[1] + gw.r[2] - hxy);
}

/// Membership in the elementary Gray-Wyner lower-bound region.
inline bool lgw_membership(const RateTriple& gw, double hx, double hy, double hxy,
                           double slack = 1e-9) {
  if (gw.tag != CoordTag::gw) throw TagMismatch("lgw_membership expects a GW triple");
  return gw.r[0] + gw.r[2] >= hx - slack && gw.r[1] + gw.r[2] >= hy - slack &&
         gw.r[0] + gw.r[1] + gw.r[2] >= hxy - slack;
}

/// Default scalarization directions: the 3-simplex grid at the given
/// resolution plus the axis directions.
inline std::vector<Weights3> weight_grid(unsigned resolution = 8) {
  std::vector<Weights3> ws;
  for (unsigned i = 0; i <= resolution; ++i)
    for (unsigned j = 0; i + j <= resolution; ++j) {
      unsigned k = resolution - i - j;
      if (i + j + k == 0) continue;
      ws.push_back(Weights3::of(i, j, k));
    }
  auto has = [&](const Weights3& w) {
    for (const auto& v : ws)
      if (v.w == w.w) return true;
    return false;
  };
  for (auto axis : {Weights3::of(1, 0, 0), Weights3::of(0, 1, 0), Weights3::of(0, 0, 1)})
    if (!has(axis)) ws.push_back(axis);
  return ws;
}

/// Traces an inner approximation of the region by scalarized search over a
/// weight grid. The two analytic channels U=constant and U=(X,Y) are always
/// injected; extra channels may be supplied (e.g. a known good construction).
inline RegionApprox trace_region(const JointPMF& pmf, CoordTag tag,
                                 const std::vector<Weights3>& weights,
                                 const OptimizerConfig& cfg = {},
                                 const std::vector<std::pair<AuxChannel, std::string>>&
                                     extra_channels = {}) {
  if (weights.empty()) throw InvalidArgument("trace_region needs a non-empty weight grid");
  RegionApprox region;
  region.tag = tag;
  region.hx = entropy(pmf, {0});
  region.hy = entropy(pmf, {1});
  region.hxy = entropy(pmf, {0, 1});

  auto coords_of = [&](const AuxChannel& ch) {
    return tag == CoordTag::aci ? aci_coordinates(pmf, ch) : gw_coordinates(pmf, ch);
  };

  std::vector<SearchResult> found(weights.size());
  parallel_for(weights.size(), [&](std::size_t i) {
    OptimizerConfig wc = cfg;
    wc.seed = derive_seed(cfg.seed, 0x5ca1ab1e + i);
    found[i] = scalarized_search(pmf, weights[i], tag, wc);
  });
  for (std::size_t i = 0; i < weights.size(); ++i) {
    char label[64];
    std::snprintf(label, sizeof(label), "search:%g,%g,%g", weights[i].w[0],
                  weights[i].w[1], weights[i].w[2]);
    region.points.push_back({coords_of(found[i].witness), found[i].witness, label});
  }
  region.points.push_back(
      {coords_of(constant_channel(pmf)), constant_channel(pmf), "analytic:constant"});
  region.points.push_back(
      {coords_of(joint_letter_channel(pmf)), joint_letter_channel(pmf), "analytic:joint"});
  for (const auto& [ch, label] : extra_channels)
    region.points.push_back({coords_of(ch), ch, label});

  // Scalarization records are taken over the full stored cloud, so each
  // recorded value is attained by a stored point by construction.
  for (const auto& w : weights) {
    RegionApprox::Scalarization s;
    s.w = w;
    s.point_index = 0;
    s.value = w.dot(region.points[0].t);
    for (std::size_t i = 1; i < region.points.size(); ++i) {
      double v = w.dot(region.points[i].t);
      if (v < s.value) {
        s.value = v;
        s.point_index = i;
      }
    }
    region.scalarizations.push_back(s);
  }
  return region;
}

/// Certifies membership: true iff the triple componentwise dominates some
/// stored point. False means "not certified", not "outside".
inline bool point_in_region_inner(const RateTriple& t, const RegionApprox& region) {
  if (t.tag != region.tag) throw TagMismatch("point/region coordinate tags differ");
  for (const auto& p : region.points)
    if (dominates(t, p.t)) return true;
  return false;
}

/// Scales a region by rho > 0 (valid because the represented hulls are
/// convex increasing sets, for which the n-fold Minkowski self-sum is plain
/// scaling). Witness channels are kept; they witness the unscaled points.
inline RegionApprox scale_region(const RegionApprox& region, double rho) {
  if (rho <= 0.0) throw InvalidArgument("scale factor must be positive");
  RegionApprox out = region;
  for (auto& p : out.points)
    for (auto& v : p.t.r) v *= rho;
  for (auto& s : out.scalarizations) s.value *= rho;
  out.hx *= rho;
  out.hy *= rho;
  out.hxy *= rho;
  return out;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// CSV export, one row per scalarization with its witnessing point. The
/// optional extra column carries the per-row affine-map cross-check
/// (max |affine(gw) - aci| over the witness channel).
inline void region_to_csv(const RegionApprox& region, const JointPMF& pmf,
                          std::ostream& os, bool with_affine_check = false) {
  os << "tag,w1,w2,w3,c1,c2,c3,value";
  if (with_affine_check) os << ",thm1_dev";
  os << "\n";
  for (const auto& s : region.scalarizations) {
    const auto& p = region.points[s.point_index];
    os << to_string(region.tag);
    for (double w : s.w.w) os << "," << detail::fmt_double(w);
    for (double c : p.t.r) os << "," << detail::fmt_double(c);
    os << "," << detail::fmt_double(s.value);
    if (with_affine_check) {
      RateTriple gw = gw_coordinates(pmf, p.witness);
      RateTriple aci = aci_coordinates(pmf, p.witness);
      RateTriple mapped = affine_map_f(region.hx, region.hy, region.hxy, gw);
      double dev = 0.0;
      for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(mapped.r[i] - aci.r[i]));
      os << "," << detail::fmt_double(dev);
    }
    os << "\n";
  }
}

struct CsvRegionRow {
  std::string tag;
  Weights3 w;
  RateTriple point;
  double value = 0.0;
};

/// Parses rows written by region_to_csv (the cross-check column is ignored).
inline std::vector<CsvRegionRow> region_rows_from_csv(std::istream& is) {
  std::vector<CsvRegionRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      if (line.rfind("tag,w1,w2,w3,c1,c2,c3,value", 0) != 0)
        throw InvalidArgument("unexpected region CSV header");
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 8) throw InvalidArgument("short region CSV row");
    CsvRegionRow r;
    r.tag = fields[0];
    r.w = Weights3::of(std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3]));
    CoordTag tag = r.tag == "aci" ? CoordTag::aci : CoordTag::gw;
    r.point.tag = tag;
    for (int i = 0; i < 3; ++i) r.point.r[i] = std::stod(fields[4 + i]);
    r.value = std::stod(fields[7]);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json region_to_json(const RegionApprox& region) {
  nlohmann::json j;
  j["tag"] = to_string(region.tag);
  j["hx"] = region.hx;
  j["hy"] = region.hy;
  j["hxy"] = region.hxy;
  j["points"] = nlohmann::json::array();
  for (const auto& p : region.points)
    j["points"].push_back({{"coords", {p.t.r[0], p.t.r[1], p.t.r[2]}},
                           {"source", p.source},
                           {"witness", aux_channel_to_json(p.witness)}});
  j["scalarizations"] = nlohmann::json::array();
  for (const auto& s : region.scalarizations)
    j["scalarizations"].push_back({{"w", {s.w.w[0], s.w.w[1], s.w.w[2]}},
                                   {"value", s.value},
                                   {"point_index", s.point_index}});
  return j;
}

}  // namespace ciregions
