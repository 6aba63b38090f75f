#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/point.hpp"

namespace ergolab {

using Complex = std::complex<double>;
using FreqVec = std::vector<std::int64_t>;

/// Trigonometric polynomial f(x) = sum_k c(k) e(k . x) with finite support,
/// k an integer frequency vector of the torus dimension. The phase k . x is
/// computed in fixed point, so it is exact mod 1 before the single rounding
/// to double.
struct TrigPoly {
  std::size_t dim = 1;
  std::map<FreqVec, Complex> coeffs;

  TrigPoly() = default;
  explicit TrigPoly(std::size_t d) : dim(d) {}

  static TrigPoly constant(Complex c, std::size_t dim = 1) {
    TrigPoly p(dim);
    if (c != Complex{0.0, 0.0}) p.coeffs[FreqVec(dim, 0)] = c;
    return p;
  }

  static TrigPoly character(FreqVec k, Complex c = {1.0, 0.0}) {
    TrigPoly p(k.size());
    p.coeffs[std::move(k)] = c;
    return p;
  }

  /// 1-D convenience: builds from {frequency, coefficient} pairs.
  static TrigPoly line(std::initializer_list<std::pair<std::int64_t, Complex>> terms) {
    TrigPoly p(1);
    for (const auto& [k, c] : terms) p.add_term({k}, c);
    return p;
  }

  TrigPoly& add_term(FreqVec k, Complex c) {
    if (k.size() != dim) throw TypeMismatch("TrigPoly: frequency dimension mismatch");
    coeffs[std::move(k)] += c;
    return *this;
  }

  Complex eval(const TorusPoint& x) const {
    if (x.dim() != dim)
      throw TypeMismatch("TrigPoly eval: point dimension " + std::to_string(x.dim()) +
                         " != observable dimension " + std::to_string(dim));
    Complex acc{0.0, 0.0};
    for (const auto& [k, c] : coeffs) {
      std::uint64_t phase = 0;
      for (std::size_t i = 0; i < dim; ++i)
        phase += static_cast<std::uint64_t>(k[i]) * x.coords[i].frac;
      acc += c * unit_phase(static_cast<double>(phase) * 0x1p-64);
    }
    return acc;
  }

  Complex mean() const {
    auto it = coeffs.find(FreqVec(dim, 0));
    return it == coeffs.end() ? Complex{0.0, 0.0} : it->second;
  }

  double sup_norm_bound() const {
    double s = 0;
    for (const auto& [k, c] : coeffs) s += std::abs(c);
    return s;
  }

  TrigPoly conjugate() const {
    TrigPoly out(dim);
    for (const auto& [k, c] : coeffs) {
      FreqVec mk(dim);
      for (std::size_t i = 0; i < dim; ++i) mk[i] = -k[i];
      out.coeffs[std::move(mk)] = std::conj(c);
    }
    return out;
  }

  TrigPoly scaled(Complex s) const {
    TrigPoly out(dim);
    for (const auto& [k, c] : coeffs) out.coeffs[k] = s * c;
    return out;
  }

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    if (a.dim != b.dim) throw TypeMismatch("TrigPoly +: dimension mismatch");
    TrigPoly out = a;
    for (const auto& [k, c] : b.coeffs) out.coeffs[k] += c;
    return out;
  }

  /// f composed with the rotation x -> x + alpha: coefficients pick up e(k . alpha).
  TrigPoly composed_with_rotation(const std::vector<CirclePoint>& alpha) const {
    if (alpha.size() != dim) throw TypeMismatch("composed_with_rotation: dimension mismatch");
    TrigPoly out(dim);
    for (const auto& [k, c] : coeffs) {
      std::uint64_t phase = 0;
      for (std::size_t i = 0; i < dim; ++i)
        phase += static_cast<std::uint64_t>(k[i]) * alpha[i].frac;
      out.coeffs[k] = c * unit_phase(static_cast<double>(phase) * 0x1p-64);
    }
    return out;
  }
};

/// Cylinder function on a subshift: depends on the word read in a fixed
/// window relative to the point, through a finite table. Words absent from
/// the table evaluate to 0.
struct CylinderFunc {
  std::int64_t window_start = 0;
  std::size_t window_len = 1;
  std::map<std::string, Complex> table;

  static CylinderFunc indicator(std::string word, std::int64_t start = 0) {
    CylinderFunc f;
    f.window_start = start;
    f.window_len = word.size();
    f.table[std::move(word)] = Complex{1.0, 0.0};
    return f;
  }

  Complex eval(const SymbolicPoint& p) const {
    std::int64_t pos = static_cast<std::int64_t>(p.offset) + window_start;
    if (pos < 0) throw ConfigError("cylinder window before the start of the one-sided orbit");
    std::string w = p.orbit->word(static_cast<std::uint64_t>(pos), window_len);
    auto it = table.find(w);
    return it == table.end() ? Complex{0.0, 0.0} : it->second;
  }

  double sup_norm_bound() const {
    double s = 0;
    for (const auto& [w, c] : table) s = std::max(s, std::abs(c));
    return s;
  }
};

using Observable = std::variant<TrigPoly, CylinderFunc>;

inline Complex evaluate(const Observable& obs, const Point& x) {
  if (const auto* tp = std::get_if<TrigPoly>(&obs)) return tp->eval(as_torus(x));
  return std::get<CylinderFunc>(obs).eval(as_symbolic(x));
}

inline double sup_norm_bound(const Observable& obs) {
  if (const auto* tp = std::get_if<TrigPoly>(&obs)) return tp->sup_norm_bound();
  return std::get<CylinderFunc>(obs).sup_norm_bound();
}

}  // namespace ergolab
