#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ciregions/channel.hpp"
#include "ciregions/pmf.hpp"

namespace ciregions {

/// String length of an oblivious-transfer instance. The joint support of the
/// OT pair has 2^(4L+2) points.
struct OTSpec {
  std::uint32_t string_length = 1;
};

namespace detail {

inline std::string bits_label(std::uint32_t v, std::uint32_t width) {
  std::string s(width, '0');
  for (std::uint32_t k = 0; k < width; ++k)
    if (v & (1u << (width - 1 - k))) s[k] = '1';
  return s;
}

}  // namespace detail

/// A single string-OT: the sender holds A = (S_1,S_2), two uniform L-bit
/// strings; the receiver holds B = (C, S_C), a uniform choice plus the chosen
/// string. Uniform over the 2^(2L+1) consistent pairs. B-labels follow the
/// appendix convention: choice digit then string bits ("10", "21", ...).
inline JointPMF make_string_ot(std::uint32_t L) {
  if (L < 1) throw InvalidArgument("string length must be >= 1");
  if (2 * L + 1 > 24) throw SizeGuard("string-OT support too large");
  const std::uint32_t S = 1u << L;
  Alphabet ax{"A", {}};
  for (std::uint32_t a = 0; a < S * S; ++a) ax.symbols.push_back(detail::bits_label(a, 2 * L));
  Alphabet ay{"B", {}};
  for (std::uint32_t c = 1; c <= 2; ++c)
    for (std::uint32_t s = 0; s < S; ++s)
      ay.symbols.push_back(std::to_string(c) + detail::bits_label(s, L));
  const double p = 1.0 / (2.0 * S * S);
  std::vector<PmfEntry> entries;
  for (std::uint32_t s1 = 0; s1 < S; ++s1)
    for (std::uint32_t s2 = 0; s2 < S; ++s2)
      for (std::uint32_t c = 0; c < 2; ++c) {
        std::uint32_t a = s1 * S + s2;
        std::uint32_t b = c * S + (c == 0 ? s1 : s2);
        entries.push_back({{a, b, 0}, p});
      }
  return JointPMF::validate({ax, ay}, std::move(entries));
}

/// Bit-OT (A,B) of the appendix: string-OT with L = 1; the support is the
/// 8-cycle of Fig. 3(a).
inline JointPMF make_bit_ot() { return make_string_ot(1); }

/// Seed of a string-OT-pair support point, recovered from symbol indices.
struct OTPairSeed {
  std::uint32_t c_a, c_b;        // choices, in {1,2}
  std::uint32_t s_a1, s_a2;      // party-A strings
  std::uint32_t s_b1, s_b2;      // party-B strings
};

namespace detail {

inline OTPairSeed decode_ot_pair(std::uint32_t xi, std::uint32_t yi, std::uint32_t L) {
  const std::uint32_t mask = (1u << L) - 1;
  OTPairSeed s{};
  s.c_a = 1 + (xi >> (3 * L));
  s.s_a1 = (xi >> (2 * L)) & mask;
  s.s_a2 = (xi >> L) & mask;
  s.c_b = 1 + (yi >> (3 * L));
  s.s_b1 = (yi >> (2 * L)) & mask;
  s.s_b2 = (yi >> L) & mask;
  return s;
}

}  // namespace detail

/// The paper's example pair: two independent string-OTs in opposite
/// directions, X = (C_A, S_A1, S_A2, S_B,CA) and Y = (C_B, S_B1, S_B2,
/// S_A,CB). Values are packed as x = C_A*2^(3L) + S_A1*2^(2L) + S_A2*2^L +
/// S_B,CA with C_A in {1,2}; symbol labels are the packed decimal values.
inline JointPMF make_string_ot_pair(std::uint32_t L) {
  if (L < 1) throw InvalidArgument("string length must be >= 1");
  if (4 * L + 2 > 24) throw SizeGuard("string-OT pair support exceeds the size guard");
  const std::uint32_t S = 1u << L;
  const std::uint32_t side = 2 * S * S * S;  // 2^(3L+1) symbols per side
  auto make_side = [&](const char* name) {
    Alphabet a{name, {}};
    a.symbols.reserve(side);
    const std::uint32_t base = S * S * S;  // packed value of index 0
    for (std::uint32_t i = 0; i < side; ++i) a.symbols.push_back(std::to_string(base + i));
    return a;
  };
  const double p = std::pow(0.5, 4.0 * L + 2.0);
  std::vector<PmfEntry> entries;
  entries.reserve(1u << (4 * L + 2));
  for (std::uint32_t c_a = 0; c_a < 2; ++c_a)
    for (std::uint32_t c_b = 0; c_b < 2; ++c_b)
      for (std::uint32_t s_a1 = 0; s_a1 < S; ++s_a1)
        for (std::uint32_t s_a2 = 0; s_a2 < S; ++s_a2)
          for (std::uint32_t s_b1 = 0; s_b1 < S; ++s_b1)
            for (std::uint32_t s_b2 = 0; s_b2 < S; ++s_b2) {
              std::uint32_t sbca = c_a == 0 ? s_b1 : s_b2;
              std::uint32_t sacb = c_b == 0 ? s_a1 : s_a2;
              std::uint32_t xi = (c_a << (3 * L)) | (s_a1 << (2 * L)) | (s_a2 << L) | sbca;
              std::uint32_t yi = (c_b << (3 * L)) | (s_b1 << (2 * L)) | (s_b2 << L) | sacb;
              entries.push_back({{xi, yi, 0}, p});
            }
  return JointPMF::validate({make_side("X"), make_side("Y")}, std::move(entries));
}

/// Letter of the example's channel Q = (C_A, C_B, S_A,CB, S_B,CA) for a
/// support pair, packed into [0, 2^(2L+2)).
inline std::uint32_t ot_paper_letter(std::uint32_t xi, std::uint32_t yi, std::uint32_t L) {
  auto s = detail::decode_ot_pair(xi, yi, L);
  std::uint32_t sbca = xi & ((1u << L) - 1);
  std::uint32_t sacb = yi & ((1u << L) - 1);
  return ((((s.c_a - 1) << 1) | (s.c_b - 1)) << (2 * L)) | (sacb << L) | sbca;
}

/// Dense channel for the paper's Q; only sensible for small L (the rows hold
/// 2^(2L+2) entries each). Larger L goes through the deterministic path.
inline AuxChannel string_ot_paper_channel(const JointPMF& pair, std::uint32_t L) {
  const std::uint32_t u = 1u << (2 * L + 2);
  if (pair.support_size() * static_cast<std::uint64_t>(u) > (1ull << 22))
    throw SizeGuard("dense paper channel too large; use the deterministic evaluation");
  AuxChannel ch;
  ch.u_size = u;
  for (const auto& e : pair.entries()) {
    std::vector<double> row(u, 0.0);
    row[ot_paper_letter(e.idx[0], e.idx[1], L)] = 1.0;
    ch.rows.push_back({{e.idx[0], e.idx[1]}, std::move(row)});
  }
  return ch;
}

/// ACI point of a deterministic channel u = letter(x,y) without materializing
/// rows; handles supports far beyond what dense channels allow.
inline RateTriple deterministic_aci_coordinates(
    const JointPMF& pmf, const std::function<std::uint32_t(std::uint32_t, std::uint32_t)>& letter) {
  // Joint (X,Y,U) entropies; U is a function of (X,Y), so H(X,Y,U) = H(X,Y).
  std::vector<std::pair<std::uint64_t, double>> xu, yu, uu;
  for (const auto& e : pmf.entries()) {
    std::uint64_t q = letter(e.idx[0], e.idx[1]);
    xu.emplace_back((static_cast<std::uint64_t>(e.idx[0]) << 32) | q, e.p);
    yu.emplace_back((static_cast<std::uint64_t>(e.idx[1]) << 32) | q, e.p);
    uu.emplace_back(q, e.p);
  }
  auto ent_of = [](std::vector<std::pair<std::uint64_t, double>>& cells) {
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    KahanSum h;
    std::size_t i = 0;
    while (i < cells.size()) {
      std::uint64_t k = cells[i].first;
      KahanSum m;
      while (i < cells.size() && cells[i].first == k) m.add(cells[i++].second);
      h.add(entropy_term(m.value()));
    }
    return h.value();
  };
  double hxu = ent_of(xu), hyu = ent_of(yu), hu = ent_of(uu);
  double hx = entropy(pmf, {0}), hy = entropy(pmf, {1}), hxy = entropy(pmf, {0, 1});
  double hxyu = hxy;  // deterministic U adds nothing
  return RateTriple::aci(hxu - hx - hxyu + hxy, hyu - hy - hxyu + hxy,
                         hxu + hyu - hxyu - hu);
}

}  // namespace ciregions
