#pragma once

#include <array>
#include <cmath>

#include "ciregions/errors.hpp"
#include "ciregions/pmf.hpp"

namespace ciregions {

/// Coordinate system of a rate triple: ACI order (R_1, R_2, R_RD) or
/// Gray-Wyner order (R_A, R_B, R_C).
enum class CoordTag { aci, gw };

inline const char* to_string(CoordTag t) { return t == CoordTag::aci ? "aci" : "gw"; }

struct RateTriple {
  std::array<double, 3> r{0.0, 0.0, 0.0};
  CoordTag tag = CoordTag::aci;

  double operator[](std::size_t i) const { return r[i]; }

  /// ACI coordinates are information quantities; roundoff negatives are
  /// clamped at construction.
  static RateTriple aci(double r1, double r2, double rd) {
    return RateTriple{{clamp_bits(r1), clamp_bits(r2), clamp_bits(rd)}, CoordTag::aci};
  }
  static RateTriple gw(double ra, double rb, double rc) {
    return RateTriple{{ra, rb, rc}, CoordTag::gw};
  }
};

inline bool dominates(const RateTriple& p, const RateTriple& q, double slack = 1e-9) {
  if (p.tag != q.tag) throw TagMismatch("cannot compare triples with different tags");
  for (std::size_t i = 0; i < 3; ++i)
    if (p.r[i] < q.r[i] - slack) return false;
  return true;
}

/// Nonnegative scalarization weights, stored normalized to unit 1-norm.
struct Weights3 {
  std::array<double, 3> w{0.0, 0.0, 0.0};

  static Weights3 of(double a, double b, double c) {
    if (a < 0 || b < 0 || c < 0) throw InvalidArgument("weights must be nonnegative");
    double s = a + b + c;
    if (s <= 0) throw InvalidArgument("weights must not all be zero");
    return Weights3{{a / s, b / s, c / s}};
  }

  double dot(const RateTriple& t) const {
    return w[0] * t.r[0] + w[1] * t.r[1] + w[2] * t.r[2];
  }
};

}  // namespace ciregions
