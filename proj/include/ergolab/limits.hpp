#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/averaging.hpp"
#include "ergolab/system.hpp"

namespace ergolab {

/// Value of a limit formula. Generally a trigonometric polynomial in the
/// base point x; constant limits carry only the zero frequency. Formula and
/// assumption tags are fixed at construction.
struct LimitValue {
  TrigPoly value;  // in x
  std::string formula;
  std::vector<std::string> assumptions;
  bool empirical = false;
  std::optional<double> tail_spread;  // long-run oracle diagnostics

  bool constant() const {
    for (const auto& [k, c] : value.coeffs)
      for (auto ki : k)
        if (ki != 0) return false;
    return true;
  }

  Complex const_value() const {
    if (!constant()) throw AssumptionError("limit value depends on the base point");
    return value.mean();
  }

  Complex at(const TorusPoint& x) const { return value.eval(x); }
};

/// An integer linear form over the slot frequency tuple: the admitted tuples
/// satisfy sum_slots coeff[slot] * k_slot = 0 (a vector equation, checked in
/// exact integer arithmetic).
struct FrequencyForm {
  std::vector<std::int64_t> coeff;  // one per slot

  bool satisfied(const std::vector<const FreqVec*>& tuple, std::size_t dim) const {
    for (std::size_t i = 0; i < dim; ++i) {
      std::int64_t s = 0;
      for (std::size_t slot = 0; slot < coeff.size(); ++slot)
        s += coeff[slot] * (*tuple[slot])[i];
      if (s != 0) return false;
    }
    return true;
  }
};

namespace detail {

/// Enumerates the cartesian product of the slot supports, keeps the tuples
/// satisfying every form, and hands (total frequency, coefficient product)
/// to the sink. Soundness: each admitted tuple is re-checked against all
/// forms in integer arithmetic right before emission.
inline void for_each_admissible(
    const std::vector<const TrigPoly*>& slots, const std::vector<FrequencyForm>& forms,
    std::size_t dim,
    const std::function<void(const FreqVec& total, Complex coeff)>& sink,
    std::uint64_t cap = (1ull << 22)) {
  std::uint64_t total_combos = 1;
  for (const auto* s : slots) {
    if (s->dim != dim) throw TypeMismatch("limit formula: observable dimension mismatch");
    total_combos *= std::max<std::uint64_t>(1, s->coeffs.size());
    if (total_combos > cap)
      throw CapExceeded("limit formula: product of supports exceeds cap");
  }
  std::vector<std::map<FreqVec, Complex>::const_iterator> its;
  for (const auto* s : slots) {
    if (s->coeffs.empty()) return;  // a zero polynomial annihilates everything
    its.push_back(s->coeffs.begin());
  }
  const std::size_t ns = slots.size();
  std::vector<const FreqVec*> tuple(ns);
  for (;;) {
    Complex prod{1.0, 0.0};
    for (std::size_t i = 0; i < ns; ++i) {
      tuple[i] = &its[i]->first;
      prod *= its[i]->second;
    }
    bool ok = true;
    for (const auto& form : forms) ok = ok && form.satisfied(tuple, dim);
    if (ok) {
      FreqVec total(dim, 0);
      for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t c = 0; c < dim; ++c) total[c] += (*tuple[i])[c];
      sink(total, prod);
    }
    // odometer over the supports
    std::size_t i = 0;
    while (i < ns) {
      if (++its[i] != slots[i]->coeffs.end()) break;
      its[i] = slots[i]->coeffs.begin();
      ++i;
    }
    if (i == ns) return;
  }
}

inline const Rotation& require_irrational_rotation(const SystemDescriptor& sys,
                                                   const char* what) {
  const auto* rot = std::get_if<Rotation>(&sys.variant);
  if (rot == nullptr)
    throw AssumptionError(std::string(what) + ": rotation system required, got " + sys.name);
  if (sys.ergodicity != ErgodicityClass::kStrictlyErgodic)
    throw AssumptionError(std::string(what) +
                          ": rotation must carry the strictly-ergodic (irrational) tag");
  return *rot;
}

}  // namespace detail

/// Weak-mixing limits are products of means: both the arithmetic-progression
/// and the cube limit measures degenerate to products, so only the zero
/// Fourier modes survive.
inline LimitValue wm_product_limit(const SystemDescriptor& sys,
                                   const std::vector<Observable>& slots,
                                   const std::string& kind) {
  if (!sys.weakly_mixing)
    throw AssumptionError("wm_product_limit: system " + sys.name +
                          " does not carry the weakly-mixing tag");
  Complex prod{1.0, 0.0};
  for (const auto& f : slots) prod *= integrate_invariant(sys, f).value;
  LimitValue out;
  out.value = TrigPoly::constant(prod, std::max<std::size_t>(sys.torus_dim, 1));
  out.formula = "wm-product-" + kind;
  out.assumptions = {"weakly-mixing"};
  return out;
}

/// Arithmetic-progression limit for an irrational rotation: the averages
/// equidistribute the pair (n, m), so a frequency tuple survives iff
///   sum_j k_j = 0   and   sum_j (j-1) k_j = 0.
/// The admitted total frequency is 0, hence the limit is constant and equals
/// the double Haar integral of prod_j f_j(z + (j-1) t).
inline LimitValue rotation_ap_limit(const SystemDescriptor& sys,
                                    const std::vector<TrigPoly>& fs) {
  detail::require_irrational_rotation(sys, "rotation_ap_limit");
  const std::size_t d = fs.size();
  if (d == 0) throw ConfigError("rotation_ap_limit: need at least one observable");
  std::vector<const TrigPoly*> slots;
  for (const auto& f : fs) slots.push_back(&f);
  std::vector<FrequencyForm> forms(2);
  forms[0].coeff.assign(d, 1);
  forms[1].coeff.resize(d);
  for (std::size_t j = 0; j < d; ++j) forms[1].coeff[j] = static_cast<std::int64_t>(j);
  TrigPoly poly(sys.torus_dim);
  detail::for_each_admissible(slots, forms, sys.torus_dim,
                              [&](const FreqVec& total, Complex c) {
                                poly.coeffs[total] += c;
                              });
  LimitValue out;
  out.value = poly;
  out.formula = "rotation-ap";
  out.assumptions = {"rotation", "irrational"};
  if (!out.constant()) throw NumericalFailure("rotation_ap_limit: non-constant value");
  return out;
}

/// Cube-face limit for an irrational rotation. The box directions
/// equidistribute independently, so the constraint is, per direction i,
///   sum_{eps : eps_i = 1} k_eps = 0,
/// and the surviving total frequency multiplies e((sum k_eps) . x): the face
/// limit genuinely depends on the base point.
inline LimitValue rotation_cube_face_limit(const SystemDescriptor& sys,
                                           const std::map<std::uint32_t, TrigPoly>& faces,
                                           int d) {
  detail::require_irrational_rotation(sys, "rotation_cube_face_limit");
  if (d < 1) throw ConfigError("rotation_cube_face_limit: d >= 1 required");
  std::vector<const TrigPoly*> slots;
  std::vector<std::uint32_t> masks;
  for (const auto& [eps, f] : faces) {
    if (eps == 0 || eps >= CubeIndex::count(d))
      throw ConfigError("rotation_cube_face_limit: bad face index");
    masks.push_back(eps);
    slots.push_back(&f);
  }
  std::vector<FrequencyForm> forms;
  for (int i = 0; i < d; ++i) {
    FrequencyForm form;
    for (std::uint32_t m : masks) form.coeff.push_back((m >> i) & 1u ? 1 : 0);
    forms.push_back(std::move(form));
  }
  TrigPoly poly(sys.torus_dim);
  detail::for_each_admissible(slots, forms, sys.torus_dim,
                              [&](const FreqVec& total, Complex c) {
                                poly.coeffs[total] += c;
                              });
  for (auto it = poly.coeffs.begin(); it != poly.coeffs.end();)
    it = (std::abs(it->second) == 0.0) ? poly.coeffs.erase(it) : std::next(it);
  LimitValue out;
  out.value = poly;
  out.formula = "rotation-cube-face";
  out.assumptions = {"rotation", "irrational"};
  return out;
}

/// Full-cube limit for an irrational rotation: the extra diagonal
/// average adds the total constraint sum_eps k_eps = 0 (all eps, including
/// the empty face), so the limit is constant.
inline LimitValue rotation_cube_full_limit(const SystemDescriptor& sys,
                                           const std::map<std::uint32_t, TrigPoly>& faces,
                                           int d) {
  detail::require_irrational_rotation(sys, "rotation_cube_full_limit");
  if (d < 1) throw ConfigError("rotation_cube_full_limit: d >= 1 required");
  std::vector<const TrigPoly*> slots;
  std::vector<std::uint32_t> masks;
  for (const auto& [eps, f] : faces) {
    if (eps >= CubeIndex::count(d))
      throw ConfigError("rotation_cube_full_limit: bad face index");
    masks.push_back(eps);
    slots.push_back(&f);
  }
  std::vector<FrequencyForm> forms;
  {
    FrequencyForm total;
    total.coeff.assign(masks.size(), 1);
    forms.push_back(std::move(total));
  }
  for (int i = 0; i < d; ++i) {
    FrequencyForm form;
    for (std::uint32_t m : masks) form.coeff.push_back((m >> i) & 1u ? 1 : 0);
    forms.push_back(std::move(form));
  }
  TrigPoly poly(sys.torus_dim);
  detail::for_each_admissible(slots, forms, sys.torus_dim,
                              [&](const FreqVec& total, Complex c) {
                                poly.coeffs[total] += c;
                              });
  LimitValue out;
  out.value = poly;
  out.formula = "rotation-cube-full";
  out.assumptions = {"rotation", "irrational"};
  if (!out.constant()) throw NumericalFailure("rotation_cube_full_limit: non-constant value");
  return out;
}

enum class SliceMap { kShift, kDouble };

/// Building-block slice integrals over the Kronecker group:
///   shift:  integral of f(z) g(s + z) dz   = sum_k c_f(-k) c_g(k) e(k s),
///   double: integral of f(z) g(s + 2z) dz  = sum_k c_f(-2k) c_g(k) e(k s).
/// Exact finite sums; the phases e(k s) use the fixed-point value of s.
inline Complex kronecker_slice_integral(const TrigPoly& f, const TrigPoly& g, CirclePoint s,
                                        SliceMap map) {
  if (f.dim != 1 || g.dim != 1)
    throw ConfigError("kronecker_slice_integral: 1-D observables required");
  Complex acc{0.0, 0.0};
  for (const auto& [kg, cg] : g.coeffs) {
    std::int64_t k = kg[0];
    std::int64_t want = (map == SliceMap::kShift) ? -k : -2 * k;
    auto it = f.coeffs.find(FreqVec{want});
    if (it == f.coeffs.end()) continue;
    acc += it->second * cg * unit_phase(s.scaled(k).turns());
  }
  return acc;
}

enum class AverageKind { kBirkhoff, kFolner, kAp, kCubeFace, kCubeFull };

/// Long-run empirical stand-in where no closed form is implemented (e.g. the
/// two-step skew product): the average at N_big plus tail diagnostics from a
/// short doubling schedule. Marked empirical; never ground truth on its own.
inline LimitValue oracle_limit_longrun(const SystemDescriptor& sys, AverageKind kind,
                                       const std::vector<Observable>& fs,
                                       const std::map<std::uint32_t, Observable>& faces, int d,
                                       const Point& x, std::int64_t N_big,
                                       std::uint64_t cap = kDefaultGridCap) {
  auto eval = [&](std::int64_t N) -> Complex {
    switch (kind) {
      case AverageKind::kBirkhoff:
        return birkhoff_average(sys, fs.at(0), x, N);
      case AverageKind::kAp:
        return ap_average(sys, fs, x, N, cap);
      case AverageKind::kCubeFace:
        return cube_face_average(sys, faces, d, x, N, cap);
      case AverageKind::kCubeFull:
        return cube_full_average(sys, faces, d, x, N, cap);
      default:
        throw ConfigError("oracle_limit_longrun: unsupported kind");
    }
  };
  std::vector<std::int64_t> schedule;
  for (std::int64_t n = std::max<std::int64_t>(1, N_big / 4); n < N_big; n *= 2)
    schedule.push_back(n);
  schedule.push_back(N_big);
  auto rep = convergence_trace(eval, schedule);
  if (rep.failed) throw NumericalFailure("oracle_limit_longrun: " + rep.failure_reason);
  LimitValue out;
  out.value = TrigPoly::constant(rep.values.back(), std::max<std::size_t>(sys.torus_dim, 1));
  out.formula = "longrun-oracle";
  out.assumptions = {"empirical"};
  out.empirical = true;
  out.tail_spread = rep.tail_spread();
  return out;
}

}  // namespace ergolab
