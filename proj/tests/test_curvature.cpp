#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvlab/charts.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/rng.hpp"
#include "support_oracles.hpp"

using namespace curvlab;

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::vector<double> sphere_point(int n) {
  std::vector<double> p(n, 1.0);  // interior angles, away from the poles
  p[n - 1] = 2.5;                 // azimuth
  for (int i = 1; i < n - 1; ++i) p[i] = 1.2 + 0.2 * i;
  return p;
}

std::vector<double> torus_point(int n, Rng& rng) {
  std::vector<double> p(n);
  for (auto& x : p) x = rng.uniform(0.7, 5.6);
  return p;
}

}  // namespace

TEST_CASE("flat chart: Christoffel symbols and curvature vanish") {
  Chart chart = charts::flat_box(3);
  CurvatureState s(chart, {0.3, 0.4, 0.5}, 2);
  CHECK(s.christoffel().max_abs_value() == 0.0);
  CHECK(s.riemann().max_abs_value() == 0.0);
  CHECK(s.scalar_curvature().value() == 0.0);
}

TEST_CASE("flat metric in polar coordinates: curvature still vanishes") {
  std::vector<std::string> coords = {"r", "theta"};
  std::vector<Expression> exprs = {
      Expression::parse("1", coords), Expression::parse("0", coords),
      Expression::parse("0", coords), Expression::parse("r^2", coords)};
  Chart chart(coords, {{0.5, 2.5}, {0.0, 6.283185307179586}}, {false, true},
              std::move(exprs), "flat polar");
  CurvatureState s(chart, {1.3, 2.0}, 2);
  CHECK(s.christoffel().at({0, 1, 1}).value() == doctest::Approx(-1.3));
  CHECK(s.riemann().max_abs_value() < 1e-12);
}

TEST_CASE("unit S^2: Gauss curvature one") {
  Chart chart = charts::sphere_polar(2);
  std::vector<double> p = {1.1, 2.0};
  CurvatureState s(chart, p, 2);
  const PointTensor& g = s.metric();
  double expect = g.at({0, 0}).value() * g.at({1, 1}).value() -
                  g.at({0, 1}).value() * g.at({0, 1}).value();
  CHECK(s.riemann().at({0, 1, 0, 1}).value() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(s.scalar_curvature().value() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("unit round spheres: the space-form stack") {
  for (int n : {3, 4, 5}) {
    CAPTURE(n);
    Chart chart = charts::sphere_polar(n);
    CurvatureState s(chart, sphere_point(n), 4);

    // R = n(n-1)
    CHECK(std::abs(s.scalar_curvature().value() - n * (n - 1)) <
          1e-9 * n * (n - 1));

    // A = g/2
    double res = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        res = std::max(res, std::abs(s.schouten().at({i, j}).value() -
                                     0.5 * s.metric().at({i, j}).value()));
    CHECK(res < 1e-9);

    // W = 0, C = 0, B = 0 (Bach needs n >= 4)
    CHECK(s.weyl().max_abs_value() < 1e-9);
    CHECK(s.cotton().max_abs_value() < 1e-9);
    if (n >= 4) CHECK(s.bach().max_abs_value() < 1e-9);

    // sigma_k = C(n,k)/2^k
    for (int k = 1; k <= n; ++k) {
      double expect = binom(n, k) / std::pow(2.0, k);
      CHECK(std::abs(s.sigma(k).value() - expect) < 1e-9 * expect);
    }

    // G_2 = 2R
    CHECK(std::abs(s.gauss_bonnet(1).value() - 2.0 * s.scalar_curvature().value()) <
          1e-9 * n * n);

    // unit sphere curvature: Rm = (g/2) (*) g
    PointTensor kn = kulkarni_nomizu(s.schouten(), s.metric());
    double dres = 0.0;
    for (std::size_t f = 0; f < kn.component_count(); ++f)
      dres = std::max(dres, std::abs(kn.flat_at(f).value() -
                                     s.riemann().flat_at(f).value()));
    CHECK(dres < 1e-9);
  }
}

TEST_CASE("unit S^4: G_4 = 96; unit S^5: v^(6) = -0.15625") {
  {
    CurvatureState s(charts::sphere_polar(4), sphere_point(4), 2);
    CHECK(std::abs(s.gauss_bonnet(2).value() - 96.0) < 1e-9 * 96.0);
  }
  {
    CurvatureState s(charts::sphere_polar(5), sphere_point(5), 4);
    CHECK(std::abs(s.v2k(3).value() + 0.15625) < 1e-9);
    CHECK(s.v2k(1).value() == doctest::Approx(-0.5 * s.sigma(1).value()));
    CHECK(s.v2k(2).value() == doctest::Approx(0.25 * s.sigma(2).value()));
  }
}

TEST_CASE("product S^2 x S^2: block structure, nonzero trace-free Weyl") {
  Chart chart = charts::product_s2xs2(1.0, 1.0);
  CurvatureState s(chart, {1.2, 2.1, 0.9, 4.0}, 2);
  const PointTensor& R = s.riemann();
  // mixed-block components vanish
  double mixed = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          bool block1 = i < 2 && j < 2 && k < 2 && l < 2;
          bool block2 = i >= 2 && j >= 2 && k >= 2 && l >= 2;
          if (!block1 && !block2)
            mixed = std::max(mixed, std::abs(R.at({i, j, k, l}).value()));
        }
  CHECK(mixed < 1e-11);
  // each block is a unit 2-sphere
  const PointTensor& g = s.metric();
  CHECK(R.at({0, 1, 0, 1}).value() ==
        doctest::Approx(g.at({0, 0}).value() * g.at({1, 1}).value()).epsilon(1e-10));
  CHECK(R.at({2, 3, 2, 3}).value() ==
        doctest::Approx(g.at({2, 2}).value() * g.at({3, 3}).value()).epsilon(1e-10));
  // not conformally flat, but Weyl is trace-free
  CHECK(s.weyl().max_abs_value() > 0.1);
  const PointTensor& gi = s.metric_inv();
  double tr = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double t = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          t += gi.at({i, j}).value() * s.weyl().at({i, a, j, b}).value();
      tr = std::max(tr, std::abs(t));
    }
  CHECK(tr < 1e-9);
}

TEST_CASE("sigma_k: Newton-identity jets vs Faddeev-LeVerrier vs minor sums") {
  Rng rng(2024);
  Chart chart = charts::torus_random_trig(4, 77, 0.1);
  CurvatureState s(chart, torus_point(4, rng), 2);
  std::vector<double> fl = sigma_values_faddeev(s);
  std::vector<double> M(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      M[i * 4 + j] = s.schouten_mixed().at({i, j}).value();
  for (int k = 1; k <= 4; ++k) {
    double newton = s.sigma(k).value();
    double minors = oracle::principal_minor_sum(M, 4, k);
    CHECK(std::abs(newton - fl[k]) < 1e-11);
    CHECK(std::abs(newton - minors) < 1e-11);
  }
}

TEST_CASE("Newton tensors: empty product and the trace identities") {
  Rng rng(4);
  Chart chart = charts::torus_random_trig(5, 3141, 0.1);
  CurvatureState s(chart, torus_point(5, rng), 2);
  const int n = 5;

  const PointTensor& T0 = s.newton_mixed(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(T0.at({i, j}).value() == doctest::Approx(i == j ? 1.0 : 0.0));

  for (int k = 1; k <= 3; ++k) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += s.newton_mixed(k).at({i, i}).value();
    CHECK(std::abs(tr - (n - k) * s.sigma(k).value()) < 1e-10);

    // invariant pairing <T^(k-1), A> with lowered/raised tensors
    PointTensor Tlow = s.newton_lowered(k - 1);
    double dot = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dot += Tlow.at({i, j}).value() * s.schouten_uu().at({i, j}).value();
    CHECK(std::abs(dot - k * s.sigma(k).value()) < 1e-10);

    // the lowered Newton tensor is symmetric
    double sym = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sym = std::max(sym, std::abs(Tlow.at({i, j}).value() -
                                     Tlow.at({j, i}).value()));
    CHECK(sym < 1e-12);
  }
}

TEST_CASE("pointwise identity spot checks on a random T^5 metric") {
  Rng rng(8);
  Chart chart = charts::torus_random_trig(5, 991, 0.1);
  std::vector<double> p = torus_point(5, rng);
  CurvatureState s(chart, p, 5);
  const int n = 5;

  // first Bianchi
  double b1 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          b1 = std::max(b1, std::abs(s.riemann().at({i, j, k, l}).value() +
                                     s.riemann().at({i, k, l, j}).value() +
                                     s.riemann().at({i, l, j, k}).value()));
  CHECK(b1 / s.riemann().max_abs_value() < 1e-10);

  // div W = -(n-3) C
  double p3 = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = s.weyl_divergence().at({i, j, k}).value();
        double rhs = -(n - 3) * s.cotton().at({i, j, k}).value();
        p3 = std::max(p3, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
      }
  CHECK(p3 / scale < 1e-8);

  // Cotton traces
  double ct = 0.0;
  for (int k = 0; k < n; ++k) {
    double t1 = 0.0, t2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        t1 += s.metric_inv().at({i, j}).value() * s.cotton().at({i, j, k}).value();
        t2 += s.metric_inv().at({i, j}).value() * s.cotton().at({i, k, j}).value();
      }
    ct = std::max({ct, std::abs(t1), std::abs(t2)});
  }
  CHECK(ct < 1e-9);

  // div T^(2) = -A:C  and  div B = (n-4) A:C
  PointTensor ac = s.schouten_dot_cotton();
  PointTensor divT = s.div_newton2();
  PointTensor divB = s.div_bach();
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(divT.at({i}).value() + ac.at({i}).value()) < 1e-7);
    CHECK(std::abs(divB.at({i}).value() - (n - 4) * ac.at({i}).value()) < 1e-7);
  }

  // P_r divergence-free, r = 1, 2
  for (int r : {1, 2}) {
    PointTensor divP = s.div_p_tensor(r);
    double dp = 0.0;
    for (int i = 0; i < n; ++i) dp = std::max(dp, std::abs(divP.at({i}).value()));
    CHECK(dp / std::max(1.0, s.p_tensor(r).max_abs_value()) < 1e-7);
  }

  // trace of P_r
  for (int r : {1, 2}) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += s.p_tensor(r).at({i, i}).value();
    double rhs = (n - 2 * r) * s.gauss_bonnet(r).value();
    CHECK(std::abs(tr - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
  }

  // G_2 = 2R
  CHECK(std::abs(s.gauss_bonnet(1).value() - 2 * s.scalar_curvature().value()) <
        1e-12 * std::abs(2 * s.scalar_curvature().value()));
}

TEST_CASE("conformally flat checks: G_2r and v^(6) reduce to sigma_r") {
  Rng rng(31);
  Chart chart = charts::torus_conformal(5, 6.283185307179586,
                                        "0.2*sin(x1)*sin(x2)");
  std::vector<double> p = torus_point(5, rng);
  CurvatureState s(chart, p, 4);
  CHECK(s.weyl().max_abs_value() < 1e-9);
  // G_4 = 192 sigma_2 at n = 5
  double lhs = s.gauss_bonnet(2).value();
  double rhs = 192.0 * s.sigma(2).value();
  CHECK(std::abs(lhs - rhs) < 1e-7 * std::max(1.0, std::abs(rhs)));
  // v6 = -sigma_3/8
  CHECK(std::abs(s.v2k(3).value() + s.sigma(3).value() / 8.0) < 1e-8);
  // Bach vanishes
  CHECK(s.bach().max_abs_value() < 1e-8);
}

TEST_CASE("jet order budget: exact order succeeds, one less is exhausted") {
  Chart chart = charts::torus_random_trig(5, 555, 0.1);
  std::vector<double> p(5, 2.0);

  auto ok = [&](int order, auto&& fn) {
    CurvatureState s(chart, p, order);
    fn(s);  // must not throw
    CurvatureState low(chart, p, order - 1);
    CHECK_THROWS_AS(fn(low), OrderExhausted);
  };

  ok(1, [](CurvatureState& s) { (void)s.christoffel(); });
  ok(2, [](CurvatureState& s) { (void)s.riemann(); });
  ok(2, [](CurvatureState& s) { (void)s.sigma(2); });
  ok(2, [](CurvatureState& s) { (void)s.newton_mixed(2); });
  ok(2, [](CurvatureState& s) { (void)s.gauss_bonnet(2); });
  ok(2, [](CurvatureState& s) { (void)s.p_tensor(1); });
  ok(3, [](CurvatureState& s) { (void)s.cotton(); });
  ok(3, [](CurvatureState& s) { (void)s.grad_sigma(2); });
  ok(3, [](CurvatureState& s) { (void)s.grad_gauss_bonnet(2); });
  ok(4, [](CurvatureState& s) { (void)s.weyl_divergence(); });
  ok(4, [](CurvatureState& s) { (void)s.bach(); });
  ok(4, [](CurvatureState& s) { (void)s.v2k(3); });
  ok(5, [](CurvatureState& s) { (void)s.grad_v6(); });
  ok(5, [](CurvatureState& s) { (void)s.div_bach(); });
  ok(5, [](CurvatureState& s) { (void)s.div_newton2(); });
  ok(5, [](CurvatureState& s) { (void)s.div_p_tensor(1); });
}

TEST_CASE("dimension guards") {
  {
    Chart chart = charts::torus_random_trig(2, 1, 0.05);
    CurvatureState s(chart, {1.0, 2.0}, 2);
    CHECK_THROWS_AS((void)s.schouten(), DimensionError);
    CHECK_THROWS_AS((void)s.weyl(), DimensionError);
  }
  {
    Chart chart = charts::torus_random_trig(3, 2, 0.05);
    CurvatureState s(chart, {1.0, 2.0, 3.0}, 4);
    CHECK_THROWS_AS((void)s.bach(), DimensionError);
    CHECK_THROWS_AS((void)s.gauss_bonnet(2), DimensionError);
  }
  {
    // v^(6) at n = 4 is a hard error, not a limit value
    Chart chart = charts::torus_random_trig(4, 3, 0.05);
    CurvatureState s(chart, {1.0, 2.0, 3.0, 4.0}, 4);
    CHECK_THROWS_AS((void)s.v2k(3), DimensionError);
    CHECK_THROWS_AS((void)s.sigma(5), DimensionError);
  }
}

TEST_CASE("gradients: space forms have constant curvature scalars") {
  CurvatureState s(charts::sphere_polar(4), sphere_point(4), 3);
  CHECK(s.grad_sigma(2).max_abs_value() < 1e-9);
  CHECK(s.grad_gauss_bonnet(2).max_abs_value() < 1e-9);
  CHECK(s.grad_scalar_curvature().max_abs_value() < 1e-9);
}

TEST_CASE("gradient of R matches finite differences of the scalar curvature") {
  Chart chart = charts::torus_random_trig(3, 17, 0.1);
  std::vector<double> p = {2.0, 3.0, 4.0};
  CurvatureState s(chart, p, 3);
  PointTensor grad = s.grad_scalar_curvature();
  auto value = [&](std::span<const double> q) {
    CurvatureState t(chart, std::vector<double>(q.begin(), q.end()), 2);
    return t.scalar_curvature().value();
  };
  for (int i = 0; i < 3; ++i) {
    double exact = grad.at({i}).value();
    double e1 = std::abs(oracle::central_diff(value, p, i, 2e-2) - exact);
    double e2 = std::abs(oracle::central_diff(value, p, i, 1e-2) - exact);
    CHECK(e2 < std::max(1e-10, 0.5 * e1));  // order >= 2 decay
    CHECK(e2 < 1e-4);
  }
  // grad sigma_1 = grad R / (2(n-1))
  PointTensor gs = s.grad_sigma(1);
  for (int i = 0; i < 3; ++i)
    CHECK(gs.at({i}).value() == doctest::Approx(grad.at({i}).value() / 4.0));
}

TEST_CASE("christoffel symmetry in the lower index pair") {
  Chart chart = charts::torus_random_trig(4, 1212, 0.1);
  CurvatureState s(chart, {1.0, 2.0, 3.0, 4.0}, 1);
  double res = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        res = std::max(res, std::abs(s.christoffel().at({k, i, j}).value() -
                                     s.christoffel().at({k, j, i}).value()));
  CHECK(res < 1e-13);
}

TEST_CASE("riemann symmetries and second contracted Bianchi on T^4") {
  Rng rng(5150);
  Chart chart = charts::torus_random_trig(4, 2626, 0.1);
  std::vector<double> p = torus_point(4, rng);
  CurvatureState s(chart, p, 3);
  const PointTensor& R = s.riemann();
  double res = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double v = R.at({i, j, k, l}).value();
          res = std::max(res, std::abs(v + R.at({j, i, k, l}).value()));
          res = std::max(res, std::abs(v + R.at({i, j, l, k}).value()));
          res = std::max(res, std::abs(v - R.at({k, l, i, j}).value()));
        }
  CHECK(res / R.max_abs_value() < 1e-10);

  // div A = d tr A
  PointTensor da = covariant_derivative(s.schouten(), s.christoffel());
  PointTensor dtr = s.grad_sigma(1);
  for (int j = 0; j < 4; ++j) {
    double lhs = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        lhs += s.metric_inv().at({i, k}).value() * da.at({i, j, k}).value();
    CHECK(std::abs(lhs - dtr.at({j}).value()) < 1e-9);
  }
}
