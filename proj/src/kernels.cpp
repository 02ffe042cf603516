#include "curvlab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace curvlab::kernels {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return avx2_ops_impl();
#endif
  return nullptr;
}

namespace {

const Ops* pick_auto() {
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

const Ops* initial() {
  if (const char* env = std::getenv("CURVLAB_KERNELS")) {
    std::string s(env);
    if (s == "scalar") return &scalar_ops();
    if (s == "avx2" && avx2_ops()) return avx2_ops();
    // unknown or unsupported value: fall through to auto
  }
  return pick_auto();
}

}  // namespace

const Ops& active() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (!p) {
    p = initial();
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

void select(std::string_view name) {
  if (name == "auto") {
    g_active.store(pick_auto(), std::memory_order_release);
  } else if (name == "scalar") {
    g_active.store(&scalar_ops(), std::memory_order_release);
  } else if (name == "avx2") {
    const Ops* v = avx2_ops();
    if (!v) throw std::invalid_argument("avx2 kernels not supported on this CPU");
    g_active.store(v, std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel set: " + std::string(name));
  }
}

}  // namespace curvlab::kernels
