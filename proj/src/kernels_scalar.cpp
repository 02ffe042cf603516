#include "curvlab/kernels.hpp"

namespace curvlab::kernels {
namespace {

void add_scalar(double* dst, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += x[i];
}

void sub_scalar(double* dst, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] -= x[i];
}

void scale_scalar(double* dst, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] *= s;
}

void axpy_scalar(double* dst, double s, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += s * x[i];
}

void conv_acc_scalar(double* dst, const double* a, const double* b,
                     const ConvTable& t, double sign) {
  const std::int32_t* ia = t.ia.data();
  const std::int32_t* ib = t.ib.data();
  const std::size_t nout = t.outputs();
  for (std::size_t c = 0; c < nout; ++c) {
    double acc = 0.0;
    for (std::int32_t k = t.off[c]; k < t.off[c + 1]; ++k)
      acc += a[ia[k]] * b[ib[k]];
    dst[c] += sign * acc;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar",    add_scalar,  sub_scalar,
                       scale_scalar, axpy_scalar, conv_acc_scalar};
  return ops;
}

}  // namespace curvlab::kernels
