#pragma once

#include <cstddef>
#include <functional>

namespace curvlab {

/// 0 means auto (hardware concurrency).
int resolve_threads(int requested);

/// Static contiguous partition of [0, total) over `threads` workers.
/// Results must not depend on the partition; accumulate in index order
/// afterwards for bit-reproducible reductions.
void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk);

/// Compensated (Kahan) accumulator; used for all fixed-order reductions.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace curvlab
