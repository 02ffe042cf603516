#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvlab/jet.hpp"
#include "curvlab/kernels.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("elementwise kernels: vector variants match scalar bitwise") {
  const kernels::Ops& sc = kernels::scalar_ops();
  const kernels::Ops* vec = kernels::avx2_ops();
  if (!vec) {
    MESSAGE("avx2 not supported on this machine; scalar-only build");
    return;
  }
  Rng rng(7);
  for (std::size_t n : {1u, 3u, 4u, 17u, 462u}) {
    std::vector<double> a = random_vec(rng, n), b = random_vec(rng, n);
    auto a1 = a, a2 = a;
    sc.add(a1.data(), b.data(), n);
    vec->add(a2.data(), b.data(), n);
    CHECK(a1 == a2);
    a1 = a;
    a2 = a;
    sc.sub(a1.data(), b.data(), n);
    vec->sub(a2.data(), b.data(), n);
    CHECK(a1 == a2);
    a1 = a;
    a2 = a;
    sc.scale(a1.data(), 1.7, n);
    vec->scale(a2.data(), 1.7, n);
    CHECK(a1 == a2);
    a1 = a;
    a2 = a;
    sc.axpy(a1.data(), -0.3, b.data(), n);
    vec->axpy(a2.data(), -0.3, b.data(), n);
    CHECK(a1 == a2);
  }
}

TEST_CASE("conv_acc: vector variant matches scalar to rounding") {
  const kernels::Ops* vec = kernels::avx2_ops();
  if (!vec) return;
  Rng rng(11);
  for (auto [dim, order] : std::vector<std::pair<int, int>>{
           {1, 3}, {2, 2}, {3, 4}, {5, 5}, {6, 5}}) {
    auto layout = JetLayout::get(dim, order);
    const auto& table = layout->conv_table();
    std::vector<double> a = random_vec(rng, layout->size());
    std::vector<double> b = random_vec(rng, layout->size());
    std::vector<double> d1(layout->size(), 0.5), d2(layout->size(), 0.5);
    kernels::scalar_ops().conv_acc(d1.data(), a.data(), b.data(), table, 1.0);
    vec->conv_acc(d2.data(), a.data(), b.data(), table, 1.0);
    for (int c = 0; c < layout->size(); ++c) {
      // bound: accumulation order differs, so allow rounding on the
      // absolute-value sum of the contributing products
      double bound = 0.0;
      for (auto k = table.off[c]; k < table.off[c + 1]; ++k)
        bound += std::abs(a[table.ia[k]] * b[table.ib[k]]);
      CHECK(std::abs(d1[c] - d2[c]) <= 1e-14 * (bound + 1.0));
    }
  }
}

TEST_CASE("kernel selection") {
  CHECK_THROWS_AS(kernels::select("neon-ish"), std::invalid_argument);
  kernels::select("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");
  kernels::select("auto");
  if (kernels::avx2_ops())
    CHECK(std::string(kernels::active().name) == "avx2");
  else
    CHECK(std::string(kernels::active().name) == "scalar");
}

TEST_CASE("jet arithmetic agrees between kernel sets") {
  if (!kernels::avx2_ops()) return;
  auto layout = JetLayout::get(4, 4);
  Rng rng(23);
  Jet a = Jet::zero(layout), b = Jet::zero(layout);
  for (int i = 0; i < layout->size(); ++i) {
    a.data()[i] = rng.uniform(-1.0, 1.0);
    b.data()[i] = rng.uniform(-1.0, 1.0);
  }
  b += 2.0;  // keep the value part away from zero for division
  kernels::select("scalar");
  Jet q_scalar = (a * b + jet_exp(a)) / b;
  kernels::select("avx2");
  Jet q_vec = (a * b + jet_exp(a)) / b;
  kernels::select("auto");
  for (int i = 0; i < layout->size(); ++i)
    CHECK(q_scalar[i] == doctest::Approx(q_vec[i]).epsilon(1e-12));
}
