#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "ergolab/errors.hpp"

namespace ergolab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// e(t) = exp(2*pi*i*t)
inline std::complex<double> unit_phase(double t) {
  return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

/// A point of the circle R/Z stored as a 64-bit fixed-point fraction of a
/// full turn (value = frac / 2^64). Addition, negation and multiplication
/// by a signed integer are arithmetic in Z/2^64 on the numerator, hence
/// exact modulo 1; quantization happens once, on input.
struct CirclePoint {
  std::uint64_t frac = 0;

  /// Nearest quantization of a real number of turns (reduced mod 1 first).
  static CirclePoint from_turns(double t) {
    if (!std::isfinite(t)) throw ConfigError("CirclePoint::from_turns: non-finite value");
    double u = t - std::floor(t);
    if (u < 0.0) u += 1.0;  // guard against -0 rounding
    long double v = static_cast<long double>(u) * 18446744073709551616.0L + 0.5L;
    if (v >= 18446744073709551616.0L) return CirclePoint{0};
    return CirclePoint{static_cast<std::uint64_t>(v)};
  }

  /// Nearest quantization of the rational num/den (exact when den | 2^64).
  static CirclePoint from_fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ConfigError("CirclePoint::from_fraction: zero denominator");
    if (den == INT64_MIN || num == INT64_MIN)
      throw ConfigError("CirclePoint::from_fraction: magnitude out of range");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t r = num % den;
    if (r < 0) r += den;
    using u128 = unsigned __int128;
    u128 scaled = (static_cast<u128>(static_cast<std::uint64_t>(r)) << 64) +
                  static_cast<u128>(den) / 2;
    return CirclePoint{static_cast<std::uint64_t>(scaled / static_cast<u128>(den))};
  }

  /// floor quantization of (sqrt(5)-1)/2, computed by integer bisection of
  /// x^2 + x = 1 so the constant is platform independent.
  static CirclePoint golden() {
    // largest f with f^2 <= (2^64 - f) * 2^64; the root is in (2^62, 2^63.5)
    std::uint64_t lo = 1, hi = ~0ull - 1;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      unsigned __int128 lhs = static_cast<unsigned __int128>(mid) * mid;
      unsigned __int128 rhs = static_cast<unsigned __int128>(0ull - mid) << 64;
      if (lhs <= rhs)
        lo = mid;
      else
        hi = mid - 1;
    }
    return CirclePoint{lo};
  }

  double turns() const { return static_cast<double>(frac) * 0x1p-64; }

  friend CirclePoint operator+(CirclePoint a, CirclePoint b) { return {a.frac + b.frac}; }
  friend CirclePoint operator-(CirclePoint a, CirclePoint b) { return {a.frac - b.frac}; }
  CirclePoint operator-() const { return {0ull - frac}; }

  /// n * x mod 1, exact for any signed n (two's complement wraparound).
  CirclePoint scaled(std::int64_t n) const {
    return {static_cast<std::uint64_t>(n) * frac};
  }

  friend bool operator==(CirclePoint a, CirclePoint b) = default;

  /// True when the fraction is representable with at most `bits` fractional
  /// bits, i.e. a dyadic rational of short period. Used for ergodicity tags.
  bool is_dyadic(int bits = 32) const {
    return frac == 0 || std::countr_zero(frac) >= 64 - bits;
  }

  /// Distance to the nearest integer, in turns.
  double dist_to_zero() const {
    double t = turns();
    return std::min(t, 1.0 - t);
  }
};

/// A point of the r-torus (R/Z)^r, componentwise CirclePoint.
struct TorusPoint {
  std::vector<CirclePoint> coords;

  TorusPoint() = default;
  explicit TorusPoint(std::vector<CirclePoint> c) : coords(std::move(c)) {}

  static TorusPoint zeros(std::size_t d) { return TorusPoint(std::vector<CirclePoint>(d)); }
  static TorusPoint from_turns(std::initializer_list<double> ts) {
    TorusPoint p;
    for (double t : ts) p.coords.push_back(CirclePoint::from_turns(t));
    return p;
  }

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

}  // namespace ergolab
