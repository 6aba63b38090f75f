#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace ergolab {

namespace detail {
inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_count_slot().store(n < 1 ? 1 : n); }
inline int thread_count() { return detail::thread_count_slot().load(); }

namespace detail {

/// Fixed-shape pairwise tree over block partials. The shape depends only on
/// the number of blocks, never on the thread schedule.
inline std::complex<double> pairwise_reduce(std::vector<std::complex<double>>& v) {
  if (v.empty()) return {0.0, 0.0};
  std::size_t len = v.size();
  while (len > 1) {
    std::size_t half = (len + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      std::complex<double> s = v[2 * i];
      if (2 * i + 1 < len) s += v[2 * i + 1];
      v[i] = s;
    }
    len = half;
  }
  return v[0];
}

template <class BlockFn>
void run_blocks(std::uint64_t nblocks, BlockFn&& fn) {
  int nthreads = thread_count();
  if (nthreads <= 1 || nblocks < 2) {
    for (std::uint64_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads - 1));
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline constexpr std::uint64_t kSumBlock = 1024;

/// Deterministic reduction of sum_{i < n} term(i): partial sums over fixed
/// 1024-element blocks of the linear index, then a pairwise tree. The result
/// is bit-identical for any thread count because each block partial is
/// computed independently and the reduction shape is fixed.
template <class TermFn>
std::complex<double> block_sum(std::uint64_t n, TermFn&& term) {
  if (n == 0) return {0.0, 0.0};
  const std::uint64_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<std::complex<double>> partial(nblocks);
  detail::run_blocks(nblocks, [&](std::uint64_t b) {
    std::complex<double> s{0.0, 0.0};
    const std::uint64_t lo = b * kSumBlock;
    const std::uint64_t hi = std::min(n, lo + kSumBlock);
    for (std::uint64_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  return detail::pairwise_reduce(partial);
}

/// Same contract, but the callback fills a whole block: fill(lo, hi) returns
/// the partial sum over linear indices [lo, hi). Lets grid kernels walk
/// their index decomposition incrementally instead of div/mod per term.
template <class FillFn>
std::complex<double> block_sum_ranges(std::uint64_t n, FillFn&& fill) {
  if (n == 0) return {0.0, 0.0};
  const std::uint64_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<std::complex<double>> partial(nblocks);
  detail::run_blocks(nblocks, [&](std::uint64_t b) {
    const std::uint64_t lo = b * kSumBlock;
    const std::uint64_t hi = std::min(n, lo + kSumBlock);
    partial[b] = fill(lo, hi);
  });
  return detail::pairwise_reduce(partial);
}

}  // namespace ergolab
