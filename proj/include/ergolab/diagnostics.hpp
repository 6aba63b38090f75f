#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ergolab/averaging.hpp"

namespace ergolab {

/// Per-point trace of a Folner-box average across a schedule. The verdict is
/// a pure function of the top-N values and the threshold; a pass is evidence
/// of unique ergodicity, a fail with a witness pair is a disproof up to
/// numerics.
struct SpreadReport {
  std::vector<std::int64_t> schedule;
  std::vector<std::vector<Complex>> values;  // [point][schedule index]
  double threshold = 5e-2;

  double spread() const {
    double s = 0.0;
    if (schedule.empty()) return s;
    std::size_t top = schedule.size() - 1;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j)
        s = std::max(s, std::abs(values[i][top] - values[j][top]));
    return s;
  }

  bool consistent() const { return spread() <= threshold; }

  std::optional<std::pair<std::size_t, std::size_t>> witness() const {
    if (consistent() || schedule.empty()) return std::nullopt;
    std::size_t top = schedule.size() - 1;
    double best = -1.0;
    std::pair<std::size_t, std::size_t> arg{0, 0};
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        double dij = std::abs(values[i][top] - values[j][top]);
        if (dij > best) {
          best = dij;
          arg = {i, j};
        }
      }
    return arg;
  }
};

inline SpreadReport unique_ergodicity_probe(const ZdAction& action, const Observable& f,
                                            const std::vector<Point>& points,
                                            const std::vector<std::int64_t>& schedule,
                                            double threshold = 5e-2,
                                            std::uint64_t cap = kDefaultGridCap) {
  if (points.size() < 2) throw ConfigError("unique_ergodicity_probe: need >= 2 probe points");
  if (schedule.empty()) throw ConfigError("unique_ergodicity_probe: empty schedule");
  SpreadReport rep;
  rep.schedule = schedule;
  rep.threshold = threshold;
  for (const auto& x : points) {
    std::vector<Complex> row;
    row.reserve(schedule.size());
    for (std::int64_t N : schedule) row.push_back(folner_box_average(action, f, x, N, cap));
    rep.values.push_back(std::move(row));
  }
  return rep;
}

/// Tempered-Folner check for the boxes F_N = [0, N)^d. The union
/// U_{k<=n} F_k^{-1} F_n is enumerated cell by cell and must equal the
/// closed form (2n-1)^d; temperedness holds with C = 2^d since
/// (2n-1)^d <= 2^d n^d exactly.
struct TemperedReport {
  int d = 1;
  std::int64_t n_max = 1;
  std::vector<std::uint64_t> union_count;  // per n = 1..n_max, exact enumeration
  std::vector<std::uint64_t> closed_form;  // (2n-1)^d
  double c_observed = 0.0;                 // max_n count / n^d
  bool holds = false;                      // count <= 2^d n^d for all n, integer check
};

inline TemperedReport tempered_check_boxes(int d, std::int64_t n_max) {
  if (d < 1 || d > 4 || n_max < 1)
    throw ConfigError("tempered_check_boxes: need 1 <= d <= 4, n_max >= 1");
  TemperedReport rep;
  rep.d = d;
  rep.n_max = n_max;
  rep.holds = true;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    // grid over [-(n-1), n-1]^d
    std::int64_t side = 2 * n - 1;
    std::uint64_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= static_cast<std::uint64_t>(side);
    std::vector<char> mark(cells, 0);
    std::uint64_t count = 0;
    // F_k^{-1} F_n = [-(k-1), n-1]^d
    for (std::int64_t k = 1; k <= n; ++k) {
      std::int64_t lo = -(k - 1), hi = n - 1;
      std::uint64_t box = 1;
      for (int i = 0; i < d; ++i) box *= static_cast<std::uint64_t>(hi - lo + 1);
      std::vector<std::int64_t> v(static_cast<std::size_t>(d), lo);
      for (std::uint64_t idx = 0; idx < box; ++idx) {
        std::uint64_t flat = 0;
        for (int i = d - 1; i >= 0; --i)
          flat = flat * static_cast<std::uint64_t>(side) +
                 static_cast<std::uint64_t>(v[static_cast<std::size_t>(i)] + (n - 1));
        if (!mark[flat]) {
          mark[flat] = 1;
          ++count;
        }
        int i = 0;
        while (i < d && ++v[static_cast<std::size_t>(i)] > hi) {
          v[static_cast<std::size_t>(i)] = lo;
          ++i;
        }
      }
    }
    std::uint64_t cf = 1;
    for (int i = 0; i < d; ++i) cf *= static_cast<std::uint64_t>(side);
    rep.union_count.push_back(count);
    rep.closed_form.push_back(cf);
    std::uint64_t nd = 1;
    for (int i = 0; i < d; ++i) nd *= static_cast<std::uint64_t>(n);
    rep.c_observed = std::max(rep.c_observed,
                              static_cast<double>(count) / static_cast<double>(nd));
    if (count > (static_cast<std::uint64_t>(1) << d) * nd) rep.holds = false;
  }
  return rep;
}

/// |(1/N) sum_n e(k . T^n x)|, the Weyl sum certifying equidistribution of
/// the orbit. k = 0 is rejected (trivially 1).
inline double equidistribution_test(const SystemDescriptor& sys, const FreqVec& k,
                                    const Point& x, std::int64_t N) {
  if (sys.torus_dim == 0)
    throw TypeMismatch("equidistribution_test: torus system required");
  bool zero = true;
  for (auto ki : k) zero = zero && ki == 0;
  if (zero) throw ConfigError("equidistribution_test: k = 0 rejected (trivially 1)");
  return std::abs(birkhoff_average(sys, TrigPoly::character(k), x, N));
}

}  // namespace ergolab
