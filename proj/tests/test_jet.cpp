#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvlab/expr.hpp"
#include "curvlab/jet.hpp"
#include "curvlab/rng.hpp"
#include "support_oracles.hpp"

using namespace curvlab;

namespace {

Jet random_jet(LayoutPtr layout, Rng& rng, double value_floor = 0.0) {
  Jet j = Jet::zero(layout);
  for (int i = 0; i < j.size(); ++i) j.data()[i] = rng.uniform(-1.0, 1.0);
  if (value_floor > 0.0 && std::abs(j.value()) < value_floor)
    j += (j.value() < 0 ? -1.0 : 1.0) * value_floor * 2;
  return j;
}

double max_coeff_diff(const Jet& a, const Jet& b) {
  double m = 0.0;
  for (int i = 0; i < std::min(a.size(), b.size()); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("layout: coefficient count and graded-lex prefix property") {
  auto l35 = JetLayout::get(3, 5);
  // C(3+5,5) = 56
  CHECK(l35->size() == 56);
  auto l34 = JetLayout::get(3, 4);
  for (int i = 0; i < l34->size(); ++i) {
    auto a = l34->exponents(i);
    auto b = l35->exponents(i);
    for (int d = 0; d < 3; ++d) CHECK(a[d] == b[d]);
  }
}

TEST_CASE("cube at 2: Taylor coefficients (8, 12, 6, 1)") {
  Jet x = Jet::variable(JetLayout::get(1, 3), 0, 2.0);
  Jet f = jet_pow_int(x, 3);
  CHECK(f[0] == doctest::Approx(8.0));
  CHECK(f[1] == doctest::Approx(12.0));
  CHECK(f[2] == doctest::Approx(6.0));
  CHECK(f[3] == doctest::Approx(1.0));
}

TEST_CASE("sine at 0: Maclaurin coefficients through degree 5") {
  Jet x = Jet::variable(JetLayout::get(1, 5), 0, 0.0);
  Jet f = jet_sin(x);
  const double expect[6] = {0, 1, 0, -1.0 / 6, 0, 1.0 / 120};
  for (int i = 0; i < 6; ++i) CHECK(f[i] == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("product rule at (1,1), order 2") {
  auto layout = JetLayout::get(2, 2);
  Jet x = Jet::variable(layout, 0, 1.0);
  Jet y = Jet::variable(layout, 1, 1.0);
  Jet f = x * y;
  CHECK(f.value() == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{1, 0}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{0, 1}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{1, 1}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{2, 0}) == doctest::Approx(0.0));
  CHECK(f.coeff(std::vector<int>{0, 2}) == doctest::Approx(0.0));
}

TEST_CASE("geometric series: 1/(1+x) at 0") {
  Jet x = Jet::variable(JetLayout::get(1, 3), 0, 0.0);
  Jet f = 1.0 / (1.0 + x);
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(-1.0));
  CHECK(f[2] == doctest::Approx(1.0));
  CHECK(f[3] == doctest::Approx(-1.0));
}

TEST_CASE("exp(x+y) at origin, order 2") {
  auto layout = JetLayout::get(2, 2);
  Jet f = jet_exp(Jet::variable(layout, 0, 0.0) + Jet::variable(layout, 1, 0.0));
  CHECK(f.value() == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{1, 0}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{0, 1}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{2, 0}) == doctest::Approx(0.5));
  CHECK(f.coeff(std::vector<int>{0, 2}) == doctest::Approx(0.5));
  CHECK(f.coeff(std::vector<int>{1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("random degree-4 polynomial in 3 variables matches the expansion oracle") {
  Rng rng(1234);
  const int dim = 3, K = 4;
  auto layout = JetLayout::get(dim, K);
  for (int trial = 0; trial < 5; ++trial) {
    // random polynomial as both an oracle Poly and a jet computation
    oracle::Poly poly = oracle::Poly::constant(dim, 0.0);
    std::vector<std::array<int, 3>> monos;
    std::vector<double> coefs;
    for (int t = 0; t < 12; ++t) {
      std::array<int, 3> e{static_cast<int>(rng.next_u64() % 3),
                           static_cast<int>(rng.next_u64() % 3),
                           static_cast<int>(rng.next_u64() % 2)};
      if (e[0] + e[1] + e[2] > 4) continue;
      double c = rng.uniform(-2.0, 2.0);
      oracle::Poly term = oracle::Poly::constant(dim, c);
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < e[v]; ++k) term = term * oracle::Poly::var(dim, v);
      poly = poly + term;
      monos.push_back(e);
      coefs.push_back(c);
    }
    std::vector<double> p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Jet jet = Jet::zero(layout);
    for (std::size_t m = 0; m < monos.size(); ++m) {
      Jet term = Jet::constant(layout, coefs[m]);
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < monos[m][v]; ++k)
          term = term * Jet::variable(layout, v, p[v]);
      jet += term;
    }
    for (int i = 0; i < layout->size(); ++i) {
      auto e = layout->exponents(i);
      std::vector<int> alpha(e.begin(), e.end());
      CHECK(std::abs(jet[i] - poly.taylor_coeff(alpha, p)) < 1e-12);
    }
  }
}

TEST_CASE("ring laws hold coefficient-wise at fixed order") {
  Rng rng(99);
  auto layout = JetLayout::get(3, 4);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a = random_jet(layout, rng);
    Jet b = random_jet(layout, rng);
    Jet c = random_jet(layout, rng);
    CHECK(max_coeff_diff((a + b) + c, a + (b + c)) < 1e-14);
    CHECK(max_coeff_diff(a * (b + c), a * b + a * c) < 1e-14);
    CHECK(max_coeff_diff(a * b, b * a) < 1e-14);
  }
}

TEST_CASE("div undoes mul when the divisor value part is away from zero") {
  Rng rng(7);
  auto layout = JetLayout::get(3, 4);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a = random_jet(layout, rng);
    Jet b = random_jet(layout, rng, 0.5);
    CHECK(max_coeff_diff((a * b) / b, a) < 1e-12);
  }
}

TEST_CASE("unary compositions match closed forms") {
  auto layout = JetLayout::get(1, 5);
  Jet x = Jet::variable(layout, 0, 0.7);
  CHECK(max_coeff_diff(jet_sin(x) * jet_sin(x) + jet_cos(x) * jet_cos(x),
                       Jet::constant(layout, 1.0)) < 1e-14);
  CHECK(max_coeff_diff(jet_tan(x), jet_sin(x) / jet_cos(x)) < 1e-13);
  CHECK(max_coeff_diff(jet_log(jet_exp(x)), x) < 1e-13);
  CHECK(max_coeff_diff(jet_sqrt(x) * jet_sqrt(x), x) < 1e-14);
  CHECK(max_coeff_diff(jet_pow_real(x, 1.5), x * jet_sqrt(x)) < 1e-13);
  CHECK(max_coeff_diff(jet_pow_int(x, -2), 1.0 / (x * x)) < 1e-12);
}

TEST_CASE("derivative coefficients: FD of the value evaluation converges at order >= 2") {
  std::vector<std::string> coords = {"x1", "x2"};
  Expression e = Expression::parse("sin(x1)*exp(x2) + x1^3/(2 + cos(x2))", coords);
  std::vector<double> p = {0.4, -0.3};
  Jet jet = e.eval_jet(p, 4);

  auto value = [&](std::span<const double> q) { return e.eval_value(q); };
  for (int v = 0; v < 2; ++v) {
    double exact = jet.derivative(v).value();
    double e1 = std::abs(oracle::central_diff(value, p, v, 1e-2) - exact);
    double e2 = std::abs(oracle::central_diff(value, p, v, 5e-3) - exact);
    double order = std::log2(e1 / e2);
    CHECK(order > 1.9);
  }
}

TEST_CASE("domain errors") {
  auto layout = JetLayout::get(1, 3);
  Jet zero = Jet::variable(layout, 0, 0.0);
  CHECK_THROWS_AS((void)jet_log(zero), DomainError);
  CHECK_THROWS_AS((void)jet_sqrt(Jet::constant(layout, -1.0)), DomainError);
  CHECK_THROWS_AS((void)(Jet::constant(layout, 1.0) / zero), DomainError);
  CHECK_THROWS_AS((void)jet_pow_real(Jet::constant(layout, -2.0), 0.5), DomainError);
  Jet order0 = Jet::constant(JetLayout::get(2, 0), 1.0);
  CHECK_THROWS_AS((void)order0.derivative(0), OrderExhausted);
}

TEST_CASE("truncation: product against the exact Cauchy product") {
  // (sum_a c_a x^a)(sum_b d_b x^b) truncated at K keeps exactly |a|+|b| <= K
  auto l2 = JetLayout::get(2, 3);
  Jet x = Jet::variable(l2, 0, 0.0);
  Jet y = Jet::variable(l2, 1, 0.0);
  Jet f = (1.0 + x + y * y) * (1.0 - x);
  CHECK(f.coeff(std::vector<int>{0, 0}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{1, 0}) == doctest::Approx(0.0));
  CHECK(f.coeff(std::vector<int>{2, 0}) == doctest::Approx(-1.0));
  CHECK(f.coeff(std::vector<int>{0, 2}) == doctest::Approx(1.0));
  CHECK(f.coeff(std::vector<int>{1, 2}) == doctest::Approx(-1.0));
}
