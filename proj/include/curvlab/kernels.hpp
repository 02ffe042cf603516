#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace curvlab::kernels {

/// Sparse pair table for truncated Taylor-series multiplication.
///
/// For output coefficient c the contributing products are
///   dst[c] += a[ia[k]] * b[ib[k]]   for k in [off[c], off[c+1]).
/// Tables are built once per (dim, order) layout and shared.
struct ConvTable {
  std::vector<std::int32_t> ia;
  std::vector<std::int32_t> ib;
  std::vector<std::int32_t> off;  // size n_out + 1

  std::size_t outputs() const { return off.empty() ? 0 : off.size() - 1; }
  std::size_t pairs() const { return ia.size(); }
};

/// One set of array kernels. `scalar` is the reference implementation;
/// vector variants must agree with it (bitwise for the elementwise ops,
/// to rounding for conv_acc, whose accumulation order differs).
struct Ops {
  const char* name;
  void (*add)(double* dst, const double* x, std::size_t n);
  void (*sub)(double* dst, const double* x, std::size_t n);
  void (*scale)(double* dst, double s, std::size_t n);
  void (*axpy)(double* dst, double s, const double* x, std::size_t n);
  // dst[c] += sign * sum_k a[ia[k]] * b[ib[k]]
  void (*conv_acc)(double* dst, const double* a, const double* b,
                   const ConvTable& t, double sign);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when unsupported at build or run time

/// Currently selected kernel set. Defaults to the best supported set;
/// the CURVLAB_KERNELS environment variable (scalar|avx2|auto) overrides.
const Ops& active();

/// Force a kernel set by name ("scalar", "avx2", "auto"). Throws
/// std::invalid_argument for unknown names or unsupported sets.
void select(std::string_view name);

}  // namespace curvlab::kernels
