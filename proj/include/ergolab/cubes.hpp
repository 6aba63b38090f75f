#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ergolab/system.hpp"

namespace ergolab {

/// Vertex index of the d-cube: eps = eps_1 ... eps_d with eps_i = bit (i-1),
/// so the enumeration order for d = 2 is (00, 10, 01, 11).
struct CubeIndex {
  int d = 1;
  std::uint32_t bits = 0;

  bool coord(int i) const { return (bits >> (i - 1)) & 1u; }  // eps_i, i in 1..d
  int weight() const { return std::popcount(bits); }

  /// n . eps = sum_i n_i eps_i
  std::int64_t dot(const std::vector<std::int64_t>& n) const {
    std::int64_t s = 0;
    for (int i = 1; i <= d; ++i)
      if (coord(i)) s += n[static_cast<std::size_t>(i - 1)];
    return s;
  }

  static std::uint32_t count(int d) { return 1u << d; }
};

/// A point of X^{2^d}, entries indexed by CubeIndex in the order above.
struct CubePoint {
  int d = 1;
  std::vector<Point> entries;  // size 2^d

  Point& at(std::uint32_t bits) { return entries[bits]; }
  const Point& at(std::uint32_t bits) const { return entries[bits]; }

  /// x = (x', x'') with x' = (x_{eps 0}) and x'' = (x_{eps 1}): the last
  /// coordinate eps_d splits the entries into lower and upper halves.
  std::pair<CubePoint, CubePoint> decompose() const {
    if (d < 1) throw ConfigError("decompose: d must be >= 1");
    std::uint32_t half = 1u << (d - 1);
    CubePoint lo{d - 1, {entries.begin(), entries.begin() + half}};
    CubePoint hi{d - 1, {entries.begin() + half, entries.end()}};
    return {lo, hi};
  }

  static CubePoint compose(const CubePoint& lo, const CubePoint& hi) {
    if (lo.d != hi.d) throw ConfigError("compose: dimension mismatch");
    CubePoint out{lo.d + 1, lo.entries};
    out.entries.insert(out.entries.end(), hi.entries.begin(), hi.entries.end());
    return out;
  }

  friend bool operator==(const CubePoint& a, const CubePoint& b) {
    return a.d == b.d && a.entries == b.entries;
  }
};

/// Element of the face group F^[d]: S_eps = T^{n . eps}. Composition is
/// vector addition of exponents (all generators commute).
struct FaceWord {
  std::vector<std::int64_t> n;

  friend FaceWord operator*(const FaceWord& a, const FaceWord& b) {
    FaceWord out = a;
    for (std::size_t i = 0; i < out.n.size(); ++i) out.n[i] += b.n[i];
    return out;
  }
};

/// Element of the parallelepiped group G^[d]: S_eps = T^{n0 + n . eps}.
/// FaceWord is the n0 = 0 case.
struct ParallelepipedWord {
  std::int64_t n0 = 0;
  std::vector<std::int64_t> n;

  friend ParallelepipedWord operator*(const ParallelepipedWord& a,
                                      const ParallelepipedWord& b) {
    ParallelepipedWord out = a;
    out.n0 += b.n0;
    for (std::size_t i = 0; i < out.n.size(); ++i) out.n[i] += b.n[i];
    return out;
  }
};

/// Word tau_d^n (sigma'_d)^m sending the diagonal point to
/// (T^{n + (j-1) m} x)_{j=1..d}.
struct APWord {
  std::int64_t n = 0;
  std::int64_t m = 0;
  int d = 1;
};

inline CubePoint diagonal(const Point& x, int d) {
  if (d < 1) throw ConfigError("diagonal: d must be >= 1");
  return CubePoint{d, std::vector<Point>(CubeIndex::count(d), x)};
}

/// Face transformation T_j^[d]: applies T exactly on the entries with
/// eps_j = 1.
inline CubePoint apply_face(int j, const SystemDescriptor& sys, const CubePoint& c) {
  if (j < 1 || j > c.d) throw ConfigError("apply_face: direction out of range");
  CubePoint out = c;
  for (std::uint32_t bits = 0; bits < CubeIndex::count(c.d); ++bits)
    if ((bits >> (j - 1)) & 1u) out.entries[bits] = iterate(sys, c.entries[bits], 1);
  return out;
}

inline CubePoint apply_face_word(const FaceWord& w, const SystemDescriptor& sys,
                                 const CubePoint& c) {
  if (w.n.size() != static_cast<std::size_t>(c.d))
    throw ConfigError("apply_face_word: word dimension mismatch");
  CubePoint out = c;
  for (std::uint32_t bits = 0; bits < CubeIndex::count(c.d); ++bits) {
    std::int64_t e = CubeIndex{c.d, bits}.dot(w.n);
    if (e != 0) out.entries[bits] = iterate(sys, c.entries[bits], e);
  }
  return out;
}

inline CubePoint apply_parallelepiped_word(const ParallelepipedWord& w,
                                           const SystemDescriptor& sys, const CubePoint& c) {
  if (w.n.size() != static_cast<std::size_t>(c.d))
    throw ConfigError("apply_parallelepiped_word: word dimension mismatch");
  CubePoint out = c;
  for (std::uint32_t bits = 0; bits < CubeIndex::count(c.d); ++bits) {
    std::int64_t e = w.n0 + CubeIndex{c.d, bits}.dot(w.n);
    if (e != 0) out.entries[bits] = iterate(sys, c.entries[bits], e);
  }
  return out;
}

/// (T^{n + (j-1) m} x)_{j=1..d}
inline std::vector<Point> ap_tuple(const SystemDescriptor& sys, const Point& x,
                                   const APWord& w) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(w.d));
  for (int j = 1; j <= w.d; ++j)
    out.push_back(iterate(sys, x, w.n + static_cast<std::int64_t>(j - 1) * w.m));
  return out;
}

enum class SampleMode { kExhaustive, kRandom };

namespace detail {

inline std::string cube_point_key(const CubePoint& c) {
  std::string key;
  for (const auto& p : c.entries) {
    if (const auto* t = std::get_if<TorusPoint>(&p)) {
      for (auto cp : t->coords) key += std::to_string(cp.frac) + ",";
    } else {
      key += "s" + std::to_string(std::get<SymbolicPoint>(p).offset) + ",";
    }
    key += "|";
  }
  return key;
}

}  // namespace detail

/// Finite sample of Q^[d] seeded at x: the distinct cube points
/// { (T^{n . eps} x)_eps : n in [0, N)^d }, or a uniform random subset.
inline std::vector<CubePoint> sample_parallelepipeds(const SystemDescriptor& sys, const Point& x,
                                                     int d, std::int64_t N, SampleMode mode,
                                                     std::uint64_t count = 0,
                                                     std::mt19937_64* rng = nullptr,
                                                     std::uint64_t cap = (1ull << 22)) {
  if (d < 1 || N < 1) throw ConfigError("sample_parallelepipeds: need d >= 1 and N >= 1");
  CubePoint diag = diagonal(x, d);
  std::vector<CubePoint> out;
  std::set<std::string> seen;
  auto emit = [&](const std::vector<std::int64_t>& n) {
    CubePoint c = apply_parallelepiped_word(ParallelepipedWord{0, n}, sys, diag);
    if (seen.insert(detail::cube_point_key(c)).second) out.push_back(std::move(c));
  };
  if (mode == SampleMode::kExhaustive) {
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
      total *= static_cast<std::uint64_t>(N);
      if (total > cap) throw CapExceeded("sample_parallelepipeds: N^d exceeds cap");
    }
    std::vector<std::int64_t> n(static_cast<std::size_t>(d), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t r = idx;
      for (int i = 0; i < d; ++i) {
        n[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
        r /= static_cast<std::uint64_t>(N);
      }
      emit(n);
    }
  } else {
    if (rng == nullptr) throw ConfigError("sample_parallelepipeds: random mode needs an rng");
    std::uniform_int_distribution<std::int64_t> dist(0, N - 1);
    std::vector<std::int64_t> n(static_cast<std::size_t>(d), 0);
    for (std::uint64_t s = 0; s < count; ++s) {
      for (auto& ni : n) ni = dist(*rng);
      emit(n);
    }
  }
  return out;
}

/// Finite-window shadow of Q^[d] for a subshift: the distinct 2^d-tuples of
/// L-letter words read at positions (offset + n . eps), n in [0, N)^d,
/// offsets in [0, N).
inline std::set<std::vector<std::string>> cube_pattern_language(const SystemDescriptor& sys,
                                                                int d, std::size_t L,
                                                                std::int64_t N,
                                                                std::uint64_t cap = (1ull << 22)) {
  const auto* sub = std::get_if<SubshiftSystem>(&sys.variant);
  if (sub == nullptr) throw TypeMismatch("cube_pattern_language: subshift system required");
  if (d < 1 || N < 1 || L < 1) throw ConfigError("cube_pattern_language: bad parameters");
  if (L * CubeIndex::count(d) > 4096)
    throw CapExceeded("cube_pattern_language: L * 2^d exceeds cap");
  std::uint64_t total = static_cast<std::uint64_t>(N);  // offsets
  for (int i = 0; i < d; ++i) {
    total *= static_cast<std::uint64_t>(N);
    if (total > cap) throw CapExceeded("cube_pattern_language: N^(d+1) exceeds cap");
  }
  std::uint64_t max_pos =
      static_cast<std::uint64_t>(N - 1) * static_cast<std::uint64_t>(d + 1) + L;
  sub->orbit->ensure(max_pos + 1);

  std::set<std::vector<std::string>> language;
  std::vector<std::int64_t> n(static_cast<std::size_t>(d), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    std::int64_t offset = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
    r /= static_cast<std::uint64_t>(N);
    for (int i = 0; i < d; ++i) {
      n[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
      r /= static_cast<std::uint64_t>(N);
    }
    std::vector<std::string> tuple;
    tuple.reserve(CubeIndex::count(d));
    for (std::uint32_t bits = 0; bits < CubeIndex::count(d); ++bits) {
      std::int64_t pos = offset + CubeIndex{d, bits}.dot(n);
      tuple.push_back(sub->orbit->word(static_cast<std::uint64_t>(pos), L));
    }
    language.insert(std::move(tuple));
  }
  return language;
}

}  // namespace ergolab
