// AVX2/FMA variants of the jet coefficient kernels. This file is compiled
// with -mavx2 -mfma on x86_64 and must only be entered after the dispatcher
// has confirmed CPU support.

#include "curvlab/kernels.hpp"

#if defined(CURVLAB_BUILD_AVX2)

#include <immintrin.h>

namespace curvlab::kernels {
namespace {

void add_avx2(double* dst, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, v));
  }
  for (; i < n; ++i) dst[i] += x[i];
}

void sub_avx2(double* dst, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(d, v));
  }
  for (; i < n; ++i) dst[i] -= x[i];
}

void scale_avx2(double* dst, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(dst + i), vs));
  for (; i < n; ++i) dst[i] *= s;
}

void axpy_avx2(double* dst, double s, const double* x, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d v = _mm256_loadu_pd(x + i);
    // separate mul+add: keeps axpy bitwise equal to the scalar kernel
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, _mm256_mul_pd(vs, v)));
  }
  for (; i < n; ++i) dst[i] += s * x[i];
}

void conv_acc_avx2(double* dst, const double* a, const double* b,
                   const ConvTable& t, double sign) {
  const std::int32_t* ia = t.ia.data();
  const std::int32_t* ib = t.ib.data();
  const std::size_t nout = t.outputs();
  for (std::size_t c = 0; c < nout; ++c) {
    const std::int32_t k0 = t.off[c];
    const std::int32_t k1 = t.off[c + 1];
    std::int32_t k = k0;
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= k1; k += 4) {
      __m128i via = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ia + k));
      __m128i vib = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ib + k));
      __m256d va = _mm256_i32gather_pd(a, via, 8);
      __m256d vb = _mm256_i32gather_pd(b, vib, 8);
      acc = _mm256_fmadd_pd(va, vb, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s2 = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
    for (; k < k1; ++k) s += a[ia[k]] * b[ib[k]];
    dst[c] += sign * s;
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2",     add_avx2,  sub_avx2,
                       scale_avx2, axpy_avx2, conv_acc_avx2};
  return &ops;
}

}  // namespace curvlab::kernels

#else

namespace curvlab::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace curvlab::kernels

#endif
