#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ergolab/averaging.hpp"
#include "ergolab/system.hpp"

namespace ergolab {

struct SeminormResult {
  int k = 1;
  double value = 0.0;  // = raw^(1 / 2^k)
  double raw = 0.0;    // the 2^k-th power before the root, clamped at 0
  enum class Method { kEmpirical, kExactRotation } method = Method::kEmpirical;
  std::int64_t N = 0, H = 0;
  double clamped_amount = 0.0;  // how far below 0 the raw surrogate dipped
};

namespace detail {

inline double root_pow2k(double raw, int k) {
  return std::pow(raw, 1.0 / static_cast<double>(1ull << k));
}

/// Shared finite-surrogate recursion. `tab` holds g(T^j x) for j < need;
/// level 1 is |Birkhoff|^2, level k averages the level-(k-1) surrogate of
/// g * T^h conj(g) over h < H.
inline double empirical_raw(const std::vector<Complex>& tab, int k, std::int64_t N,
                            std::int64_t H) {
  if (k == 1) {
    Complex s{0.0, 0.0};
    for (std::int64_t n = 0; n < N; ++n) s += tab[static_cast<std::uint64_t>(n)];
    double m = std::abs(s) / static_cast<double>(N);
    return m * m;
  }
  double acc = 0.0;
  std::vector<Complex> prod(tab.size());
  for (std::int64_t h = 0; h < H; ++h) {
    std::uint64_t len = tab.size() - static_cast<std::uint64_t>(h);
    prod.resize(len);
    for (std::uint64_t j = 0; j < len; ++j)
      prod[j] = tab[j] * std::conj(tab[j + static_cast<std::uint64_t>(h)]);
    acc += empirical_raw(prod, k - 1, N, H);
  }
  return acc / static_cast<double>(H);
}

}  // namespace detail

/// Finite-(N, H) surrogate of the seminorm recursion
///   ||f||_{k+1}^{2^{k+1}} = lim_H (1/H) sum_h ||f . T^h conj(f)||_k^{2^k},
/// base ||f||_1 = |integral of f|, with the integral replaced by a length-N
/// Birkhoff average from `x`. Cost grows as N * H^(k-1); k <= 3.
inline SeminormResult hk_seminorm_empirical(const SystemDescriptor& sys, const Observable& f,
                                            int k, std::int64_t N, std::int64_t H,
                                            const Point& x,
                                            std::uint64_t op_cap = (1ull << 34)) {
  if (k < 1 || k > 3) throw ConfigError("hk_seminorm_empirical: k must be in 1..3");
  if (N < 1 || H < 1) throw ConfigError("hk_seminorm_empirical: N, H >= 1 required");
  double ops = static_cast<double>(N);
  for (int lvl = 1; lvl < k; ++lvl) ops *= static_cast<double>(H);
  if (ops > static_cast<double>(op_cap))
    throw CapExceeded("hk_seminorm_empirical: N * H^(k-1) = " + std::to_string(ops) +
                      " exceeds cap; the recursion cost doubles per level");

  std::uint64_t need =
      static_cast<std::uint64_t>(N) + static_cast<std::uint64_t>(k - 1) * static_cast<std::uint64_t>(H);
  auto tab = detail::orbit_evaluations(sys, f, x, need);

  SeminormResult res;
  res.k = k;
  res.method = SeminormResult::Method::kEmpirical;
  res.N = N;
  res.H = H;
  double raw = detail::empirical_raw(tab, k, N, H);
  if (raw < 0.0) {
    res.clamped_amount = -raw;
    if (raw < -1e-6)
      throw NumericalFailure("hk_seminorm_empirical: surrogate dipped below -1e-6");
    raw = 0.0;
  }
  res.raw = raw;
  res.value = detail::root_pow2k(raw, k);
  return res;
}

namespace detail {

/// Symbolic state of the exact-rotation recursion: a trigonometric
/// polynomial in x and in the formal shift variables theta_l = h_l alpha,
/// keyed by [n, q_1, .., q_L] with value c, meaning c e(n x) prod e(q_l h_l alpha).
using SymPoly = std::map<std::vector<std::int64_t>, Complex>;

inline SymPoly sym_conj_negate(const SymPoly& p) {
  SymPoly out;
  for (const auto& [key, c] : p) {
    auto mk = key;
    for (auto& v : mk) v = -v;
    out[std::move(mk)] += std::conj(c);
  }
  return out;
}

inline SymPoly sym_mul(const SymPoly& a, const SymPoly& b, std::size_t cap) {
  SymPoly out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      std::vector<std::int64_t> k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out[std::move(k)] += ca * cb;
      if (out.size() > cap)
        throw SupportExplosion("hk_seminorm_rotation_exact: symbolic support exceeds cap");
    }
  }
  // drop numerically dead terms
  for (auto it = out.begin(); it != out.end();)
    it = (std::abs(it->second) < 1e-15) ? out.erase(it) : std::next(it);
  return out;
}

/// ||G||_k^{2^k} as a polynomial in the shift variables present in G.
/// Key layout of G: [n, q_1..q_L]; the returned keys are [q_1..q_L].
inline SymPoly sym_norm_pow(const SymPoly& g, int k, std::size_t nvars, std::size_t cap) {
  if (k == 1) {
    // integral in x keeps n = 0; then |I|^2 = I * conj(I)
    SymPoly integral;
    for (const auto& [key, c] : g) {
      if (key[0] != 0) continue;
      integral[std::vector<std::int64_t>(key.begin() + 1, key.end())] += c;
    }
    return sym_mul(integral, sym_conj_negate(integral), cap);
  }
  // g' = g * T^{h_new} conj(g): the conjugated copy picks up q_new = -n
  SymPoly lifted, shifted;
  for (const auto& [key, c] : g) {
    auto ka = key;
    ka.push_back(0);
    lifted[std::move(ka)] += c;
  }
  for (const auto& [key, c] : sym_conj_negate(g)) {
    auto kb = key;
    kb.push_back(key[0]);  // e(n_conj h_new alpha) with n_conj = -n
    shifted[std::move(kb)] += c;
  }
  SymPoly next = sym_mul(lifted, shifted, cap);
  SymPoly inner = sym_norm_pow(next, k - 1, nvars + 1, cap);
  // average over h_new: for irrational alpha, lim (1/H) sum_h e(q h alpha) = [q = 0]
  SymPoly out;
  for (const auto& [key, c] : inner) {
    if (key.back() != 0) continue;
    out[std::vector<std::int64_t>(key.begin(), key.end() - 1)] += c;
  }
  return out;
}

}  // namespace detail

/// Exact Host-Kra seminorm of a 1-D trigonometric polynomial under an
/// irrational rotation, by running the recursion symbolically: the shift
/// variables stay formal and each average keeps only their zero frequency
/// (character orthogonality). alpha is treated as formally irrational
/// regardless of its fixed-point quantization. For k = 2 the result equals
/// (sum |c(n)|^4)^(1/4).
inline SeminormResult hk_seminorm_rotation_exact(const TrigPoly& f, int k,
                                                 std::size_t term_cap = (1u << 20)) {
  if (k < 1 || k > 4) throw ConfigError("hk_seminorm_rotation_exact: k must be in 1..4");
  if (f.dim != 1)
    throw ConfigError("hk_seminorm_rotation_exact: 1-D frequency support required");
  SeminormResult res;
  res.k = k;
  res.method = SeminormResult::Method::kExactRotation;
  if (k == 1) {
    res.value = std::abs(f.mean());
    res.raw = res.value * res.value;
    return res;
  }
  detail::SymPoly g;
  for (const auto& [kv, c] : f.coeffs) g[{kv[0]}] += c;
  detail::SymPoly p = detail::sym_norm_pow(g, k, 0, term_cap);
  double raw = 0.0;
  auto it = p.find(std::vector<std::int64_t>{});
  if (it != p.end()) raw = it->second.real();
  if (raw < 0.0) {
    res.clamped_amount = -raw;
    raw = 0.0;
  }
  res.raw = raw;
  res.value = detail::root_pow2k(raw, k);
  return res;
}

/// A bounded sequence of vectors in a finite-dimensional complex
/// inner-product space.
struct HilbertSequence {
  std::vector<std::vector<Complex>> terms;
  double sup_norm = 0.0;

  static HilbertSequence from_scalars(std::vector<Complex> xs) {
    HilbertSequence seq;
    seq.terms.reserve(xs.size());
    for (Complex v : xs) {
      seq.sup_norm = std::max(seq.sup_norm, std::abs(v));
      seq.terms.push_back({v});
    }
    return seq;
  }
};

/// x_n = f(T^n x) as scalars.
inline HilbertSequence orbit_hilbert_sequence(const SystemDescriptor& sys, const Observable& f,
                                              const Point& x, std::size_t len) {
  return HilbertSequence::from_scalars(detail::orbit_evaluations(sys, f, x, len));
}

/// Finite surrogate of the van der Corput inequality:
///   lhs = ||(1/N) sum_n x_n||^2,
///   rhs = (1/H) sum_{h=1..H} |(1/N) sum_n <x_n, x_{n+h}>|.
/// holds = (lhs <= rhs + tolerance). At small N, H a violation is a warning
/// about the surrogate, not a refutation of the asymptotic statement.
struct VdcResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0;  // rhs + tolerance - lhs
};

inline VdcResult vdc_bound_check(const HilbertSequence& seq, std::int64_t N, std::int64_t H,
                                 double tolerance = 1e-6) {
  if (N < 1 || H < 1) throw ConfigError("vdc_bound_check: N, H >= 1 required");
  if (seq.terms.size() < static_cast<std::size_t>(N + H))
    throw ConfigError("vdc_bound_check: sequence shorter than N + H");
  const std::size_t dim = seq.terms[0].size();

  std::vector<Complex> mean(dim, Complex{0.0, 0.0});
  for (std::int64_t n = 0; n < N; ++n)
    for (std::size_t i = 0; i < dim; ++i) mean[i] += seq.terms[static_cast<std::size_t>(n)][i];
  double lhs = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    Complex v = mean[i] / static_cast<double>(N);
    lhs += std::norm(v);
  }

  double rhs = 0.0;
  for (std::int64_t h = 1; h <= H; ++h) {
    Complex corr{0.0, 0.0};
    for (std::int64_t n = 0; n < N; ++n) {
      const auto& u = seq.terms[static_cast<std::size_t>(n)];
      const auto& v = seq.terms[static_cast<std::size_t>(n + h)];
      for (std::size_t i = 0; i < dim; ++i) corr += u[i] * std::conj(v[i]);
    }
    rhs += std::abs(corr) / static_cast<double>(N);
  }
  rhs /= static_cast<double>(H);

  VdcResult out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.slack = rhs + tolerance - lhs;
  out.holds = out.slack >= 0.0;
  return out;
}

}  // namespace ergolab
