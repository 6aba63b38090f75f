#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ergolab/cubes.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/system.hpp"

namespace ergolab {

inline constexpr std::uint64_t kDefaultGridCap = 1ull << 28;

namespace detail {

/// out[k] = f(T^k x) for k in [0, len). The table is filled by stepping the
/// orbit once per entry; for the torus variants this is bit-identical to the
/// closed form at every index (wraparound arithmetic is associative).
inline std::vector<Complex> orbit_evaluations(const SystemDescriptor& sys, const Observable& f,
                                              const Point& x, std::uint64_t len) {
  std::vector<Complex> out(len);
  Point cur = x;
  for (std::uint64_t k = 0; k < len; ++k) {
    out[k] = evaluate(f, cur);
    if (k + 1 < len) cur = iterate(sys, cur, 1);
  }
  return out;
}

/// (1/N) * sum of tab[0..N) with the canonical block reduction.
inline Complex table_average(const std::vector<Complex>& tab, std::int64_t N) {
  Complex s = block_sum_ranges(static_cast<std::uint64_t>(N),
                               [&](std::uint64_t lo, std::uint64_t hi) {
                                 Complex acc{0.0, 0.0};
                                 for (std::uint64_t i = lo; i < hi; ++i) acc += tab[i];
                                 return acc;
                               });
  return s / static_cast<double>(N);
}

inline void check_grid_cap(std::int64_t N, int dims, std::uint64_t cap, const char* what) {
  if (N < 1 || dims < 1) throw ConfigError(std::string(what) + ": need N >= 1, d >= 1");
  std::uint64_t total = 1;
  for (int i = 0; i < dims; ++i) {
    total *= static_cast<std::uint64_t>(N);
    if (total > cap)
      throw CapExceeded(std::string(what) + ": grid size N^d exceeds cap " + std::to_string(cap));
  }
}

}  // namespace detail

/// The Folner box F_N = [0, N)^d of Z^d. |F_N| = N^d, and the family is
/// tempered with constant 2^d (checked exactly by diagnostics).
struct FolnerBox {
  int d = 1;
  std::int64_t N = 1;

  std::uint64_t cardinality() const {
    std::uint64_t c = 1;
    for (int i = 0; i < d; ++i) c *= static_cast<std::uint64_t>(N);
    return c;
  }
};

/// (1/N) sum_{n<N} f(T^n x)
inline Complex birkhoff_average(const SystemDescriptor& sys, const Observable& f, const Point& x,
                                std::int64_t N) {
  if (N < 1) throw ConfigError("birkhoff_average: N >= 1 required");
  auto tab = detail::orbit_evaluations(sys, f, x, static_cast<std::uint64_t>(N));
  return detail::table_average(tab, N);
}

/// A Z^d action by commuting closed-form maps. The common case is d
/// exponent strides of a single system: direction i sends gamma to
/// T^{strides[i] * gamma}. Arbitrary direction maps are allowed through
/// `custom`; they are spot-checked for commutation before use.
struct ZdAction {
  SystemDescriptor sys;
  std::vector<std::int64_t> strides;
  using CustomMap = std::function<Point(const Point&, std::int64_t)>;
  std::vector<CustomMap> custom;

  int dims() const {
    return static_cast<int>(custom.empty() ? strides.size() : custom.size());
  }

  Point apply_dir(int i, const Point& p, std::int64_t gamma) const {
    if (!custom.empty()) return custom[static_cast<std::size_t>(i)](p, gamma);
    return iterate(sys, p, strides[static_cast<std::size_t>(i)] * gamma);
  }
};

inline ZdAction birkhoff_action(SystemDescriptor sys) { return {std::move(sys), {1}, {}}; }

/// (n, m) -> T^{n + (j-1) m}
inline ZdAction ap_direction_action(SystemDescriptor sys, int j) {
  return {std::move(sys), {1, j - 1}, {}};
}

namespace detail {

inline void spot_check_commutation(const ZdAction& action, const Point& x,
                                   std::uint64_t seed = 0x5eedu) {
  int d = action.dims();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(1, 4);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int rep = 0; rep < 3; ++rep) {
        std::int64_t a = dist(rng), b = dist(rng);
        Point p = action.apply_dir(j, action.apply_dir(i, x, a), b);
        Point q = action.apply_dir(i, action.apply_dir(j, x, b), a);
        if (!points_equal(p, q))
          throw CommutationError("folner_box_average: directions " + std::to_string(i + 1) +
                                 " and " + std::to_string(j + 1) + " do not commute");
      }
    }
  }
}

}  // namespace detail

/// Folner-box average (1/N^d) sum_{gamma in [0,N)^d} f(T_gamma x).
/// With d = 1 and stride 1 this is the Birkhoff loop, bit for bit.
inline Complex folner_box_average(const ZdAction& action, const Observable& f, const Point& x,
                                  std::int64_t N, std::uint64_t cap = kDefaultGridCap) {
  int d = action.dims();
  if (d < 1) throw ConfigError("folner_box_average: empty action");
  detail::check_grid_cap(N, d, cap, "folner_box_average");
  detail::spot_check_commutation(action, x);

  if (action.custom.empty()) {
    // exponent range of sum_i strides[i] * gamma_i over the box
    std::int64_t emin = 0, emax = 0;
    for (std::int64_t s : action.strides) {
      if (s >= 0)
        emax += s * (N - 1);
      else
        emin += s * (N - 1);
    }
    Point start = iterate(action.sys, x, emin);
    auto tab = detail::orbit_evaluations(action.sys, f, start,
                                         static_cast<std::uint64_t>(emax - emin) + 1);
    if (d == 1 && action.strides[0] == 1) return detail::table_average(tab, N);
    const std::int64_t s0 = action.strides[0];
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(N);
    Complex sum = block_sum_ranges(total, [&](std::uint64_t lo, std::uint64_t hi) {
      std::vector<std::int64_t> g(static_cast<std::size_t>(d));
      std::uint64_t r = lo;
      for (int i = 0; i < d; ++i) {
        g[static_cast<std::size_t>(i)] =
            static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
        r /= static_cast<std::uint64_t>(N);
      }
      std::int64_t e = -emin;
      for (int i = 0; i < d; ++i)
        e += action.strides[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
      Complex acc{0.0, 0.0};
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        acc += tab[static_cast<std::uint64_t>(e)];
        if (++g[0] < N) {
          e += s0;
        } else {
          // odometer carry: recompute the exponent
          g[0] = 0;
          int i = 1;
          while (i < d && ++g[static_cast<std::size_t>(i)] == N) {
            g[static_cast<std::size_t>(i)] = 0;
            ++i;
          }
          e = -emin;
          for (int k = 0; k < d; ++k)
            e += action.strides[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
        }
      }
      return acc;
    });
    return sum / std::pow(static_cast<double>(N), d);
  }

  // custom maps: closed-form jumps along each axis, generic term evaluation
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(N);
  Complex sum = block_sum(total, [&](std::uint64_t idx) {
    std::uint64_t r = idx;
    Point p = x;
    for (int i = 0; i < d; ++i) {
      std::int64_t gi = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
      r /= static_cast<std::uint64_t>(N);
      p = action.apply_dir(i, p, gi);
    }
    return evaluate(f, p);
  });
  return sum / std::pow(static_cast<double>(N), d);
}

/// Average over an explicit Folner box of the action's dimension.
inline Complex folner_box_average(const ZdAction& action, const Observable& f, const Point& x,
                                  const FolnerBox& box, std::uint64_t cap = kDefaultGridCap) {
  if (box.d != action.dims())
    throw ConfigError("folner_box_average: box dimension does not match the action");
  return folner_box_average(action, f, x, box.N, cap);
}

/// Cube-face average
/// (1/N^d) sum_{n in [0,N)^d} prod_{eps != 0} f_eps(T^{n . eps} x).
/// Faces absent from the map act as the constant 1. Per-face 1-D orbit
/// tables are precomputed once; each grid term is table lookups only.
inline Complex cube_face_average(const SystemDescriptor& sys,
                                 const std::map<std::uint32_t, Observable>& faces, int d,
                                 const Point& x, std::int64_t N,
                                 std::uint64_t cap = kDefaultGridCap) {
  detail::check_grid_cap(N, d, cap, "cube_face_average");
  std::vector<std::uint32_t> masks;
  std::vector<std::vector<Complex>> tabs;
  for (const auto& [eps, f] : faces) {
    if (eps == 0) throw ConfigError("cube_face_average: slot eps = 0 is not part of (C1)");
    if (eps >= CubeIndex::count(d)) throw ConfigError("cube_face_average: eps out of range");
    std::uint64_t len = static_cast<std::uint64_t>(N - 1) *
                            static_cast<std::uint64_t>(std::popcount(eps)) +
                        1;
    masks.push_back(eps);
    tabs.push_back(detail::orbit_evaluations(sys, f, x, len));
  }
  if (masks.empty()) return {1.0, 0.0};

  const std::size_t nf = masks.size();
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(N);
  Complex sum = block_sum_ranges(total, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::int64_t> n(static_cast<std::size_t>(d));
    std::uint64_t r = lo;
    for (int i = 0; i < d; ++i) {
      n[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
      r /= static_cast<std::uint64_t>(N);
    }
    std::vector<std::int64_t> e(nf);
    auto recompute = [&] {
      for (std::size_t fidx = 0; fidx < nf; ++fidx) {
        std::int64_t s = 0;
        for (int i = 0; i < d; ++i)
          if ((masks[fidx] >> i) & 1u) s += n[static_cast<std::size_t>(i)];
        e[fidx] = s;
      }
    };
    recompute();
    Complex acc{0.0, 0.0};
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      Complex t = tabs[0][static_cast<std::uint64_t>(e[0])];
      for (std::size_t fidx = 1; fidx < nf; ++fidx)
        t *= tabs[fidx][static_cast<std::uint64_t>(e[fidx])];
      acc += t;
      if (++n[0] < N) {
        for (std::size_t fidx = 0; fidx < nf; ++fidx)
          if (masks[fidx] & 1u) ++e[fidx];
      } else {
        n[0] = 0;
        int i = 1;
        while (i < d && ++n[static_cast<std::size_t>(i)] == N) {
          n[static_cast<std::size_t>(i)] = 0;
          ++i;
        }
        recompute();
      }
    }
    return acc;
  });
  return sum / std::pow(static_cast<double>(N), d);
}

/// Full-cube average
/// (1/N^{d+1}) sum_{n, n} prod_{eps subset [d]} f_eps(T^{n + n . eps} x),
/// with the diagonal index n running over [0, N) as well.
inline Complex cube_full_average(const SystemDescriptor& sys,
                                 const std::map<std::uint32_t, Observable>& faces, int d,
                                 const Point& x, std::int64_t N,
                                 std::uint64_t cap = kDefaultGridCap) {
  detail::check_grid_cap(N, d + 1, cap, "cube_full_average");
  std::vector<std::uint32_t> masks;
  std::vector<std::vector<Complex>> tabs;
  for (const auto& [eps, f] : faces) {
    if (eps >= CubeIndex::count(d)) throw ConfigError("cube_full_average: eps out of range");
    std::uint64_t len = static_cast<std::uint64_t>(N - 1) *
                            static_cast<std::uint64_t>(std::popcount(eps) + 1) +
                        1;
    masks.push_back(eps);
    tabs.push_back(detail::orbit_evaluations(sys, f, x, len));
  }
  if (masks.empty()) return {1.0, 0.0};

  const std::size_t nf = masks.size();
  std::uint64_t total = 1;
  for (int i = 0; i <= d; ++i) total *= static_cast<std::uint64_t>(N);
  // linear index: diagonal exponent fastest, then n_1 .. n_d
  Complex sum = block_sum_ranges(total, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::int64_t> n(static_cast<std::size_t>(d + 1));
    std::uint64_t r = lo;
    for (int i = 0; i <= d; ++i) {
      n[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(r % static_cast<std::uint64_t>(N));
      r /= static_cast<std::uint64_t>(N);
    }
    std::vector<std::int64_t> base(nf);
    auto recompute = [&] {
      for (std::size_t fidx = 0; fidx < nf; ++fidx) {
        std::int64_t s = 0;
        for (int i = 1; i <= d; ++i)
          if ((masks[fidx] >> (i - 1)) & 1u) s += n[static_cast<std::size_t>(i)];
        base[fidx] = s;
      }
    };
    recompute();
    Complex acc{0.0, 0.0};
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::int64_t n0 = n[0];
      Complex t = tabs[0][static_cast<std::uint64_t>(base[0] + n0)];
      for (std::size_t fidx = 1; fidx < nf; ++fidx)
        t *= tabs[fidx][static_cast<std::uint64_t>(base[fidx] + n0)];
      acc += t;
      if (++n[0] == N) {
        n[0] = 0;
        int i = 1;
        while (i <= d && ++n[static_cast<std::size_t>(i)] == N) {
          n[static_cast<std::size_t>(i)] = 0;
          ++i;
        }
        recompute();
      }
    }
    return acc;
  });
  return sum / std::pow(static_cast<double>(N), d + 1);
}

/// Arithmetic-progression average
/// (1/N^2) sum_{n, m in [0,N)} prod_j f_j(T^{n + (j-1) m} x).
inline Complex ap_average(const SystemDescriptor& sys, const std::vector<Observable>& fs,
                          const Point& x, std::int64_t N, std::uint64_t cap = kDefaultGridCap) {
  const int d = static_cast<int>(fs.size());
  if (d < 1) throw ConfigError("ap_average: need at least one observable");
  if (d == 1) return birkhoff_average(sys, fs[0], x, N);  // m-independent
  detail::check_grid_cap(N, 2, cap, "ap_average");
  std::vector<std::vector<Complex>> tabs;
  tabs.reserve(fs.size());
  for (int j = 1; j <= d; ++j) {
    std::uint64_t len = static_cast<std::uint64_t>(N - 1) * static_cast<std::uint64_t>(j) + 1;
    tabs.push_back(
        detail::orbit_evaluations(sys, fs[static_cast<std::size_t>(j - 1)], x, len));
  }
  std::uint64_t total = static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N);
  // linear index: n fastest, then m
  Complex sum = block_sum_ranges(total, [&](std::uint64_t lo, std::uint64_t hi) {
    std::int64_t n = static_cast<std::int64_t>(lo % static_cast<std::uint64_t>(N));
    std::int64_t m = static_cast<std::int64_t>(lo / static_cast<std::uint64_t>(N));
    std::vector<const Complex*> row(static_cast<std::size_t>(d));
    auto set_row = [&] {
      for (int j = 1; j <= d; ++j)
        row[static_cast<std::size_t>(j - 1)] =
            tabs[static_cast<std::size_t>(j - 1)].data() + (j - 1) * m;
    };
    set_row();
    Complex acc{0.0, 0.0};
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      Complex t = row[0][n];
      for (int j = 2; j <= d; ++j) t *= row[static_cast<std::size_t>(j - 1)][n];
      acc += t;
      if (++n == N) {
        n = 0;
        ++m;
        set_row();
      }
    }
    return acc;
  });
  return sum / (static_cast<double>(N) * static_cast<double>(N));
}

/// Convergence trace of an average along an increasing N-schedule.
struct AverageReport {
  std::string kind;
  std::vector<std::int64_t> schedule;
  std::vector<Complex> values;
  std::optional<Complex> predicted;
  std::string predicted_formula;
  int tail_window = 3;
  bool failed = false;
  std::string failure_reason;
  double elapsed_seconds = 0.0;

  /// max |value_i - value_j| over the trailing window; recomputed, not cached.
  double tail_spread() const {
    if (values.empty()) return 0.0;
    std::size_t w = static_cast<std::size_t>(tail_window);
    std::size_t lo = values.size() > w ? values.size() - w : 0;
    double spread = 0.0;
    for (std::size_t i = lo; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j)
        spread = std::max(spread, std::abs(values[i] - values[j]));
    return spread;
  }

  double abs_error_at(std::size_t i) const {
    if (!predicted || i >= values.size()) return std::nan("");
    return std::abs(values[i] - *predicted);
  }
};

inline AverageReport convergence_trace(const std::function<Complex(std::int64_t)>& average,
                                       const std::vector<std::int64_t>& schedule,
                                       int tail_window = 3,
                                       std::optional<Complex> predicted = std::nullopt,
                                       std::string predicted_formula = "") {
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw ConfigError("convergence_trace: schedule must be strictly increasing");
  AverageReport rep;
  rep.schedule = schedule;
  rep.tail_window = tail_window;
  rep.predicted = predicted;
  rep.predicted_formula = std::move(predicted_formula);
  auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t N : schedule) {
    Complex v = average(N);
    if (std::isnan(v.real()) || std::isnan(v.imag())) {
      rep.failed = true;
      rep.failure_reason = "NaN at N = " + std::to_string(N);
    }
    rep.values.push_back(v);
  }
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Telescoping decomposition of prod a_i - prod b_i (one term per slot) and
/// the bound sum |a_i - b_i|, valid when all |a_i|, |b_i| <= 1.
struct ProductDifference {
  std::vector<Complex> terms;  // terms[i] = a_1..a_{i-1} (a_i - b_i) b_{i+1}..b_k
  double bound = 0.0;
  Complex prod_a{1.0, 0.0};
  Complex prod_b{1.0, 0.0};

  Complex term_sum() const {
    Complex s{0.0, 0.0};
    for (Complex t : terms) s += t;
    return s;
  }
};

inline ProductDifference product_difference_bound(const std::vector<Complex>& a,
                                                  const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw ConfigError("product_difference_bound: length mismatch");
  const std::size_t k = a.size();
  ProductDifference out;
  std::vector<Complex> suffix_b(k + 1, Complex{1.0, 0.0});
  for (std::size_t i = k; i-- > 0;) suffix_b[i] = b[i] * suffix_b[i + 1];
  Complex prefix_a{1.0, 0.0};
  for (std::size_t i = 0; i < k; ++i) {
    out.terms.push_back(prefix_a * (a[i] - b[i]) * suffix_b[i + 1]);
    out.bound += std::abs(a[i] - b[i]);
    prefix_a *= a[i];
  }
  out.prod_a = prefix_a;
  out.prod_b = suffix_b[0];
  return out;
}

}  // namespace ergolab
