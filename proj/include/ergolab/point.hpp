#pragma once

#include <variant>

#include "ergolab/fixed_point.hpp"
#include "ergolab/substitution.hpp"

namespace ergolab {

using Point = std::variant<TorusPoint, SymbolicPoint>;

inline const TorusPoint& as_torus(const Point& p) {
  if (const auto* t = std::get_if<TorusPoint>(&p)) return *t;
  throw TypeMismatch("expected a torus point");
}

inline const SymbolicPoint& as_symbolic(const Point& p) {
  if (const auto* s = std::get_if<SymbolicPoint>(&p)) return *s;
  throw TypeMismatch("expected a subshift point");
}

inline bool points_equal(const Point& a, const Point& b) { return a == b; }

}  // namespace ergolab
