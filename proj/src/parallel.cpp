#include "curvlab/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace curvlab {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk) {
  const int nt = std::max(1, std::min<int>(resolve_threads(threads),
                                           static_cast<int>(std::max<std::size_t>(total, 1))));
  if (nt == 1 || total == 0) {
    chunk(0, total);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t base = total / nt;
  const std::size_t rem = total % nt;
  std::size_t begin = 0;
  for (int t = 0; t < nt; ++t) {
    std::size_t len = base + (static_cast<std::size_t>(t) < rem ? 1 : 0);
    std::size_t end = begin + len;
    pool.emplace_back([&, begin, end]() {
      try {
        chunk(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace curvlab
