#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/observable.hpp"
#include "ergolab/point.hpp"

namespace ergolab {

enum class ErgodicityClass { kStrictlyErgodic, kErgodicNotUniquelyErgodic };

struct Rotation {
  std::vector<CirclePoint> alpha;
};

/// T(x, y) = (x + a, y + 2x + a); T^n(x, y) = (x + n a, y + 2n x + n^2 a).
struct SkewProduct {
  CirclePoint alpha;
};

/// Integer 2x2 matrix with |det| = 1 acting on the 2-torus. Powers are taken
/// with entries reduced mod 2^64, which leaves the action on fixed-point
/// coordinates exact for every exponent.
struct ToralAutomorphism {
  std::array<std::int64_t, 4> m{2, 1, 1, 1};  // row-major [[a, b], [c, d]]

  std::int64_t det() const { return m[0] * m[3] - m[1] * m[2]; }
  std::int64_t trace() const { return m[0] + m[3]; }
  /// no eigenvalue is a root of unity
  bool hyperbolic() const {
    if (det() == 1) return trace() > 2 || trace() < -2;
    return trace() != 0;  // det == -1
  }
};

struct SubshiftSystem {
  std::shared_ptr<SubstitutionOrbit> orbit;
};

struct SystemDescriptor;

struct ProductSystem {
  std::shared_ptr<SystemDescriptor> left;
  std::shared_ptr<SystemDescriptor> right;
};

struct SystemDescriptor {
  std::variant<Rotation, SkewProduct, ToralAutomorphism, SubshiftSystem, ProductSystem> variant;
  ErgodicityClass ergodicity = ErgodicityClass::kStrictlyErgodic;
  bool weakly_mixing = false;
  bool kronecker_explicit = false;
  std::size_t torus_dim = 0;  // 0 for subshift
  std::string name;
};

inline SystemDescriptor make_rotation(std::vector<CirclePoint> alpha,
                                      bool force_strictly_ergodic = false) {
  SystemDescriptor s;
  bool dyadic = false;
  for (auto a : alpha) dyadic = dyadic || a.is_dyadic();
  s.torus_dim = alpha.size();
  s.variant = Rotation{std::move(alpha)};
  s.ergodicity = (dyadic && !force_strictly_ergodic)
                     ? ErgodicityClass::kErgodicNotUniquelyErgodic
                     : ErgodicityClass::kStrictlyErgodic;
  s.kronecker_explicit = true;
  s.name = "rotation";
  return s;
}

inline SystemDescriptor make_rotation_golden() {
  return make_rotation({CirclePoint::golden()});
}

inline SystemDescriptor make_skew_product(CirclePoint alpha,
                                          bool force_strictly_ergodic = false) {
  SystemDescriptor s;
  s.variant = SkewProduct{alpha};
  s.torus_dim = 2;
  s.ergodicity = (alpha.is_dyadic() && !force_strictly_ergodic)
                     ? ErgodicityClass::kErgodicNotUniquelyErgodic
                     : ErgodicityClass::kStrictlyErgodic;
  s.kronecker_explicit = true;
  s.name = "skew";
  return s;
}

inline SystemDescriptor make_toral_automorphism(std::int64_t a, std::int64_t b, std::int64_t c,
                                                std::int64_t d) {
  ToralAutomorphism t{{a, b, c, d}};
  if (t.det() != 1 && t.det() != -1)
    throw ConfigError("toral automorphism: |det| must be 1, got " + std::to_string(t.det()));
  SystemDescriptor s;
  s.variant = t;
  s.torus_dim = 2;
  s.ergodicity = ErgodicityClass::kErgodicNotUniquelyErgodic;
  s.weakly_mixing = t.hyperbolic();
  s.name = "toral";
  return s;
}

inline SystemDescriptor make_cat_map() {
  auto s = make_toral_automorphism(2, 1, 1, 1);
  s.name = "cat";
  return s;
}

inline SystemDescriptor make_subshift(const std::string& rule_name,
                                      std::uint64_t horizon_cap = (1ull << 24)) {
  SystemDescriptor s;
  s.variant =
      SubshiftSystem{std::make_shared<SubstitutionOrbit>(SubstitutionRule::lookup(rule_name),
                                                         horizon_cap)};
  s.ergodicity = ErgodicityClass::kStrictlyErgodic;  // primitive substitution
  s.name = "subshift:" + rule_name;
  return s;
}

/// Product of two toral systems on the concatenated coordinates. Products
/// involving a subshift are not supported in this build. The product of
/// strictly ergodic systems need not be uniquely ergodic, so the tag is
/// conservative.
inline SystemDescriptor make_product(SystemDescriptor left, SystemDescriptor right) {
  if (left.torus_dim == 0 || right.torus_dim == 0)
    throw ConfigError("product systems require toral factors");
  SystemDescriptor s;
  s.torus_dim = left.torus_dim + right.torus_dim;
  s.ergodicity = ErgodicityClass::kErgodicNotUniquelyErgodic;
  s.weakly_mixing = left.weakly_mixing && right.weakly_mixing;
  s.kronecker_explicit = left.kronecker_explicit && right.kronecker_explicit;
  s.name = "product(" + left.name + "," + right.name + ")";
  s.variant = ProductSystem{std::make_shared<SystemDescriptor>(std::move(left)),
                            std::make_shared<SystemDescriptor>(std::move(right))};
  return s;
}

namespace detail {

/// 2x2 matrix over Z/2^64 (wraparound); exact for the torus action.
struct Mat2 {
  std::uint64_t a = 1, b = 0, c = 0, d = 1;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
};

inline Mat2 mat_pow(Mat2 base, std::uint64_t e) {
  Mat2 r;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

inline Mat2 automorphism_power(const ToralAutomorphism& t, std::int64_t n) {
  Mat2 base;
  if (n >= 0) {
    base = {static_cast<std::uint64_t>(t.m[0]), static_cast<std::uint64_t>(t.m[1]),
            static_cast<std::uint64_t>(t.m[2]), static_cast<std::uint64_t>(t.m[3])};
    return mat_pow(base, static_cast<std::uint64_t>(n));
  }
  // inverse = adj / det with |det| = 1
  std::int64_t s = t.det();  // +1 or -1
  base = {static_cast<std::uint64_t>(s * t.m[3]), static_cast<std::uint64_t>(-s * t.m[1]),
          static_cast<std::uint64_t>(-s * t.m[2]), static_cast<std::uint64_t>(s * t.m[0])};
  return mat_pow(base, static_cast<std::uint64_t>(-(n + 1)) + 1);
}

}  // namespace detail

/// T^n x by closed form, never by n-fold composition. Exact (wraparound
/// fixed point) on all torus variants; index shift on subshifts.
inline Point iterate(const SystemDescriptor& sys, const Point& x, std::int64_t n) {
  if (const auto* rot = std::get_if<Rotation>(&sys.variant)) {
    TorusPoint p = as_torus(x);
    if (p.dim() != sys.torus_dim) throw TypeMismatch("iterate: point dimension mismatch");
    for (std::size_t i = 0; i < p.dim(); ++i)
      p.coords[i] = p.coords[i] + rot->alpha[i].scaled(n);
    return p;
  }
  if (const auto* skew = std::get_if<SkewProduct>(&sys.variant)) {
    TorusPoint p = as_torus(x);
    if (p.dim() != 2) throw TypeMismatch("iterate: skew product needs a 2-torus point");
    std::uint64_t un = static_cast<std::uint64_t>(n);
    CirclePoint nx{(2 * un) * p.coords[0].frac};
    CirclePoint nnalpha{(un * un) * skew->alpha.frac};
    p.coords[1] = p.coords[1] + nx + nnalpha;         // y + 2n x + n^2 a
    p.coords[0] = p.coords[0] + skew->alpha.scaled(n);  // x + n a
    return p;
  }
  if (const auto* aut = std::get_if<ToralAutomorphism>(&sys.variant)) {
    TorusPoint p = as_torus(x);
    if (p.dim() != 2) throw TypeMismatch("iterate: toral automorphism needs a 2-torus point");
    auto mp = detail::automorphism_power(*aut, n);
    std::uint64_t x0 = p.coords[0].frac, x1 = p.coords[1].frac;
    p.coords[0].frac = mp.a * x0 + mp.b * x1;
    p.coords[1].frac = mp.c * x0 + mp.d * x1;
    return p;
  }
  if (const auto* sub = std::get_if<SubshiftSystem>(&sys.variant)) {
    SymbolicPoint p = as_symbolic(x);
    std::int64_t pos = static_cast<std::int64_t>(p.offset) + n;
    if (pos < 0) throw ConfigError("subshift iterate: negative index on a one-sided orbit");
    if (static_cast<std::uint64_t>(pos) > sub->orbit->horizon_cap())
      throw HorizonExhausted("subshift iterate beyond horizon cap");
    p.offset = static_cast<std::uint64_t>(pos);
    return p;
  }
  const auto& prod = std::get<ProductSystem>(sys.variant);
  const TorusPoint& p = as_torus(x);
  if (p.dim() != sys.torus_dim) throw TypeMismatch("iterate: point dimension mismatch");
  std::size_t ld = prod.left->torus_dim;
  TorusPoint lp(std::vector<CirclePoint>(p.coords.begin(), p.coords.begin() + ld));
  TorusPoint rp(std::vector<CirclePoint>(p.coords.begin() + ld, p.coords.end()));
  TorusPoint lo = as_torus(iterate(*prod.left, lp, n));
  TorusPoint ro = as_torus(iterate(*prod.right, rp, n));
  lo.coords.insert(lo.coords.end(), ro.coords.begin(), ro.coords.end());
  return lo;
}

inline Point base_point(const SystemDescriptor& sys) {
  if (const auto* sub = std::get_if<SubshiftSystem>(&sys.variant))
    return SymbolicPoint{sub->orbit, 0};
  return TorusPoint::zeros(sys.torus_dim);
}

inline Point random_point(const SystemDescriptor& sys, std::mt19937_64& rng,
                          std::uint64_t subshift_offset_bound = (1ull << 16)) {
  if (const auto* sub = std::get_if<SubshiftSystem>(&sys.variant))
    return SymbolicPoint{sub->orbit, rng() % subshift_offset_bound};
  TorusPoint p;
  p.coords.resize(sys.torus_dim);
  for (auto& c : p.coords) c.frac = rng();
  return p;
}

struct InvariantIntegral {
  Complex value{0.0, 0.0};
  bool approximate = false;
  std::uint64_t samples = 0;
  double error_hint = 0.0;
};

/// Integral of an observable against the invariant reference measure:
/// Haar for toral systems (exact, kills every nonzero frequency), Perron
/// letter frequencies for one-letter cylinders, and a long-orbit Birkhoff
/// estimate (flagged approximate) for longer windows.
inline InvariantIntegral integrate_invariant(const SystemDescriptor& sys, const Observable& obs,
                                             std::uint64_t birkhoff_n = (1ull << 18)) {
  if (const auto* tp = std::get_if<TrigPoly>(&obs)) {
    if (sys.torus_dim == 0) throw TypeMismatch("trig polynomial on a subshift system");
    if (tp->dim != sys.torus_dim)
      throw TypeMismatch("integrate_invariant: observable dimension mismatch");
    // Haar orthogonality: only the zero frequency survives.
    return {tp->mean(), false, 0, 0.0};
  }
  const auto& cf = std::get<CylinderFunc>(obs);
  const auto* sub = std::get_if<SubshiftSystem>(&sys.variant);
  if (sub == nullptr) throw TypeMismatch("cylinder function on a non-subshift system");
  if (cf.window_len == 1) {
    auto freq = sub->orbit->rule().letter_frequencies();
    Complex v{0.0, 0.0};
    for (const auto& [w, c] : cf.table) {
      std::size_t letter = static_cast<std::size_t>(w[0] - '0');
      if (letter < freq.size()) v += c * freq[letter];
    }
    return {v, false, 0, 0.0};
  }
  // longer windows: Birkhoff estimate along the fixed point
  sub->orbit->ensure(std::min<std::uint64_t>(birkhoff_n + cf.window_len + 8,
                                             sub->orbit->horizon_cap()));
  std::uint64_t n = std::min<std::uint64_t>(birkhoff_n,
                                            sub->orbit->horizon_cap() - cf.window_len - 8);
  Complex acc{0.0, 0.0};
  SymbolicPoint p{sub->orbit, 0};
  for (std::uint64_t i = 0; i < n; ++i) {
    p.offset = i;
    acc += cf.eval(p);
  }
  Complex v = acc / static_cast<double>(n);
  double hint = cf.sup_norm_bound() / std::sqrt(static_cast<double>(n));
  return {v, true, n, hint};
}

/// Projection to the explicit Kronecker factor: identity for rotations, the
/// base coordinate for the skew product, concatenation for products of
/// explicit factors.
inline std::vector<CirclePoint> kronecker_coordinate(const SystemDescriptor& sys,
                                                     const Point& x) {
  if (!sys.kronecker_explicit)
    throw AssumptionError("Kronecker factor not explicit in this build for " + sys.name);
  if (std::holds_alternative<Rotation>(sys.variant)) return as_torus(x).coords;
  if (std::holds_alternative<SkewProduct>(sys.variant)) return {as_torus(x).coords[0]};
  const auto& prod = std::get<ProductSystem>(sys.variant);
  const TorusPoint& p = as_torus(x);
  std::size_t ld = prod.left->torus_dim;
  TorusPoint lp(std::vector<CirclePoint>(p.coords.begin(), p.coords.begin() + ld));
  TorusPoint rp(std::vector<CirclePoint>(p.coords.begin() + ld, p.coords.end()));
  auto out = kronecker_coordinate(*prod.left, lp);
  auto rr = kronecker_coordinate(*prod.right, rp);
  out.insert(out.end(), rr.begin(), rr.end());
  return out;
}

/// Rotation vector of the Kronecker factor (used to express intertwining).
inline std::vector<CirclePoint> kronecker_rotation(const SystemDescriptor& sys) {
  if (const auto* rot = std::get_if<Rotation>(&sys.variant)) return rot->alpha;
  if (const auto* skew = std::get_if<SkewProduct>(&sys.variant)) return {skew->alpha};
  if (const auto* prod = std::get_if<ProductSystem>(&sys.variant)) {
    auto out = kronecker_rotation(*prod->left);
    auto rr = kronecker_rotation(*prod->right);
    out.insert(out.end(), rr.begin(), rr.end());
    return out;
  }
  throw AssumptionError("Kronecker factor not explicit in this build for " + sys.name);
}

}  // namespace ergolab
