#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvlab/charts.hpp"
#include "curvlab/conformal.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("rescale at t = 0 reproduces the chart") {
  Chart chart = charts::torus_random_trig(3, 5, 0.1);
  Expression eta = Expression::parse("sin(x1)", chart.coords());
  Chart same = rescale(chart, eta, 0.0);
  std::vector<double> p = {1.0, 2.0, 3.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(same.metric_entry(i, j).eval_value(p) ==
            chart.metric_entry(i, j).eval_value(p));
}

TEST_CASE("stereographic factor turns the flat metric into the round sphere") {
  for (int n : {3, 4}) {
    CAPTURE(n);
    Chart flat = charts::flat_box(n);
    std::string norm2;
    for (int i = 1; i <= n; ++i) {
      if (i > 1) norm2 += " + ";
      norm2 += "x" + std::to_string(i) + "^2";
    }
    Expression eta = Expression::parse("log(2/(1 + " + norm2 + "))", flat.coords());
    Chart sphere = rescale(flat, eta, 1.0);
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = 0.1 + 0.13 * i;
    CurvatureState s(sphere, p, 2);
    CHECK(std::abs(s.scalar_curvature().value() - n * (n - 1)) < 1e-10 * n * n);
    CHECK(s.weyl().max_abs_value() < 1e-9);
    CurvatureState s3(sphere, p, 3);
    CHECK(s3.cotton().max_abs_value() < 1e-8);
  }
}

TEST_CASE("determinant scaling under rescale") {
  Chart chart = charts::torus_random_trig(4, 21, 0.1);
  Expression eta = Expression::parse("0.3*cos(x1)*sin(x2)", chart.coords());
  const double t = 0.7;
  Chart resc = rescale(chart, eta, t);
  std::vector<double> p = {1.0, 2.2, 3.1, 4.4};
  auto det_of = [&](const Chart& c) {
    PointTensor g = c.metric_jets(p, 0);
    std::vector<Jet> m(16, Jet::zero(g.layout()));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i * 4 + j] = g.at({i, j});
    return jet_mat_det(std::move(m), 4).value();
  };
  double expect = std::exp(2.0 * 4 * t * eta.eval_value(p)) * det_of(chart);
  CHECK(det_of(resc) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("rescale composes additively in t") {
  Chart chart = charts::torus_random_trig(3, 77, 0.1);
  Expression eta = Expression::parse("0.4*sin(x1 + 0.3)*cos(x3)", chart.coords());
  Chart twice = rescale(rescale(chart, eta, 0.3), eta, 0.45);
  Chart once = rescale(chart, eta, 0.75);
  std::vector<double> p = {0.5, 1.5, 2.5};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double a = twice.metric_entry(i, j).eval_value(p);
      double b = once.metric_entry(i, j).eval_value(p);
      CHECK(std::abs(a - b) < 1e-13 * (1.0 + std::abs(b)));
    }
}

TEST_CASE("Lie derivative of the metric: isometries and homotheties") {
  // rotation on flat R^2
  {
    Chart flat = charts::flat_box(2);
    VectorFieldSpec rot;
    rot.components = {Expression::parse("-x2", flat.coords()),
                      Expression::parse("x1", flat.coords())};
    CurvatureState s(flat, {0.4, 0.7}, 1);
    CHECK(lie_metric(s, rot).max_abs_value() < 1e-14);
    CHECK(std::abs(divergence(s, rot).value()) < 1e-14);
  }
  // dilation on flat R^n: L_X g = 2g, div X = n
  {
    const int n = 3;
    Chart flat = charts::flat_box(n);
    VectorFieldSpec dil;
    for (int i = 1; i <= n; ++i)
      dil.components.push_back(
          Expression::parse("x" + std::to_string(i), flat.coords()));
    CurvatureState s(flat, {0.2, 0.5, 0.8}, 1);
    PointTensor L = lie_metric(s, dil);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(L.at({i, j}).value() ==
              doctest::Approx(2.0 * (i == j ? 1.0 : 0.0)).epsilon(1e-14));
    CHECK(divergence(s, dil).value() == doctest::Approx(3.0));
  }
  // translation on a conformally flat torus: L_X g = 2 (d_1 w) g
  {
    Chart torus = charts::torus_conformal(3, kTwoPi, "0.2*sin(x1)*cos(x2)");
    VectorFieldSpec tr;
    tr.components = {Expression::parse("1", torus.coords()),
                     Expression::parse("0", torus.coords()),
                     Expression::parse("0", torus.coords())};
    std::vector<double> p = {1.1, 2.3, 0.4};
    CurvatureState s(torus, p, 1);
    PointTensor L = lie_metric(s, tr);
    Expression w = Expression::parse("0.2*sin(x1)*cos(x2)", torus.coords());
    double dw = w.eval_jet(p, 1).derivative(0).value();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(L.at({i, j}).value() ==
              doctest::Approx(2.0 * dw * s.metric().at({i, j}).value())
                  .epsilon(1e-12));
    CHECK(divergence(s, tr).value() == doctest::Approx(3.0 * dw).epsilon(1e-12));
  }
}

TEST_CASE("conformal Killing residual") {
  // gradient CKV on the round sphere
  {
    Chart sphere = charts::sphere_polar(4);
    auto fields = builtin_fields(ChartKind::SpherePolar, 4);
    REQUIRE(fields.size() == 2);
    CHECK(fields[0].label == "sphere_ckv");
    std::vector<double> p = {1.0, 1.3, 0.8, 2.0};
    CHECK(ckv_relative_residual(sphere, fields[0], p) < 1e-9);
    CHECK(ckv_relative_residual(sphere, fields[1], p) < 1e-12);
    // conformal invariance of the CKV condition
    Chart conf = charts::sphere_polar(4, "0.25*cos(t1)");
    CHECK(ckv_relative_residual(conf, fields[0], p) < 1e-9);
    // a generic field is rejected
    VectorFieldSpec generic;
    generic.components = {Expression::parse("sin(t2)", sphere.coords()),
                          Expression::parse("t1", sphere.coords()),
                          Expression::parse("0.3", sphere.coords()),
                          Expression::parse("cos(t1)", sphere.coords())};
    CHECK(ckv_relative_residual(sphere, generic, p) > 1e-2);
  }
  // torus translations are conformal Killing only on conformally flat metrics
  {
    Chart conf = charts::torus_conformal(3, kTwoPi, "0.2*sin(x1)*sin(x2)");
    auto fields = builtin_fields(ChartKind::Torus, 3);
    std::vector<double> p = {1.0, 2.0, 3.0};
    CHECK(ckv_relative_residual(conf, fields[0], p) < 1e-10);
    Chart generic = charts::torus_random_trig(3, 4242, 0.1);
    CHECK(ckv_relative_residual(generic, fields[0], p) > 1e-3);
  }
  // flat box: translations, rotations, dilation, special conformal
  {
    Chart flat = charts::flat_box(3);
    auto fields = builtin_fields(ChartKind::FlatBox, 3);
    std::vector<double> p = {0.3, 0.5, 0.7};
    for (const auto& f : fields) {
      CAPTURE(f.label);
      CHECK(ckv_relative_residual(flat, f, p) < 1e-11);
    }
    CHECK_THROWS_AS((void)builtin_fields(ChartKind::Generic, 3), UnknownChartKind);
  }
}

TEST_CASE("variation: Schouten endomorphism derivative") {
  Chart chart = charts::torus_random_trig(4, 314, 0.1);
  Expression eta = Expression::parse("0.5*sin(x1)*cos(x2)", chart.coords());
  VariationResult r =
      variation_residual(VariationKind::SchoutenDot, chart, eta, nullptr,
                         std::vector<double>{1.2, 2.1, 3.3, 4.0});
  CHECK(r.residual_extrap < 1e-6);
  REQUIRE(r.fd_order.has_value());
  CHECK(*r.fd_order > 1.9);
  CHECK(*r.fd_order < 2.1);
}

TEST_CASE("variation: divergence derivative is exactly linear in t") {
  Chart chart = charts::torus_conformal(3, kTwoPi, "0.1*sin(x2)");
  Expression eta = Expression::parse("0.4*cos(x1)", chart.coords());
  auto fields = builtin_fields(ChartKind::Torus, 3);
  VariationResult r =
      variation_residual(VariationKind::DivDot, chart, eta, &fields[0],
                         std::vector<double>{1.0, 2.0, 3.0});
  CHECK(r.residual_extrap < 1e-9);
  CHECK(r.saturated);  // no quadratic term to measure
}

TEST_CASE("exact conformal law for doubly-raised Riemann") {
  Chart chart = charts::torus_random_trig(5, 999, 0.1);
  std::vector<double> p = {1.0, 2.0, 3.0, 4.0, 5.0};
  // constant factor: alpha = 0 and pure exponential scaling
  {
    Expression c = Expression::parse("0.37", chart.coords());
    VariationParams params;
    params.t = 1.0;
    VariationResult r = variation_residual(VariationKind::RiemannConformal, chart,
                                           c, nullptr, p, params);
    CHECK(r.residual < 1e-11);
  }
  // generic factor at two finite times
  Expression eta = Expression::parse("0.3*sin(x1)*cos(x3)", chart.coords());
  for (double t : {0.3, 1.0}) {
    CAPTURE(t);
    VariationParams params;
    params.t = t;
    VariationResult r = variation_residual(VariationKind::RiemannConformal, chart,
                                           eta, nullptr, p, params);
    CHECK(r.residual < 1e-9);
  }
}

TEST_CASE("variation: Bach derivative on a random T^5 metric") {
  Chart chart = charts::torus_random_trig(5, 2718, 0.1);
  Expression eta = Expression::parse("0.5*sin(x1)*cos(x2)", chart.coords());
  VariationResult r =
      variation_residual(VariationKind::BachDot, chart, eta, nullptr,
                         std::vector<double>{1.1, 2.2, 3.3, 4.4, 5.5});
  CHECK(r.residual_extrap < 1e-6);
  REQUIRE(r.fd_order.has_value());
  CHECK(*r.fd_order > 1.9);
  CHECK(*r.fd_order < 2.1);
}

TEST_CASE("variation: v^(6) on the unit S^5") {
  Chart chart = charts::sphere_polar(5);
  Expression eta = Expression::parse("cos(t1)", chart.coords());
  VariationResult r =
      variation_residual(VariationKind::V6Variation, chart, eta, nullptr,
                         std::vector<double>{1.1, 1.4, 0.9, 1.2, 2.0});
  CHECK(r.residual_extrap < 1e-6);
  REQUIRE(r.fd_order.has_value());
  CHECK(*r.fd_order > 1.9);
  CHECK(*r.fd_order < 2.1);
}

TEST_CASE("variation: L_X G_2r chain on the round S^6") {
  Chart chart = charts::sphere_polar(6);
  auto fields = builtin_fields(ChartKind::SpherePolar, 6);
  Expression unused = Expression::parse("0", chart.coords());
  VariationParams params;
  params.r = 2;
  VariationResult r = variation_residual(
      VariationKind::G2rVariation, chart, unused, &fields[0],
      std::vector<double>{1.0, 1.2, 1.4, 0.9, 1.1, 2.4}, params);
  CHECK(r.residual < 1e-6);
}

TEST_CASE("variation: L_X G_2r chain on a conformally flat T^5") {
  Chart chart = charts::torus_conformal(5, kTwoPi, "0.2*sin(x1)*sin(x2)");
  auto fields = builtin_fields(ChartKind::Torus, 5);
  Expression unused = Expression::parse("0", chart.coords());
  for (int r = 1; r <= 2; ++r) {
    CAPTURE(r);
    VariationParams params;
    params.r = r;
    VariationResult res = variation_residual(
        VariationKind::G2rVariation, chart, unused, &fields[0],
        std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0}, params);
    CHECK(res.residual < 1e-6);
  }
}

TEST_CASE("pointwise v^(6) divergence identity with the sphere CKV") {
  Chart chart = charts::sphere_polar(5, "0.25*cos(t1)");
  auto fields = builtin_fields(ChartKind::SpherePolar, 5);
  double res = v6_divergence_identity_residual(
      chart, fields[0], std::vector<double>{1.1, 1.3, 0.9, 1.4, 2.0});
  CHECK(res < 1e-6);
}

TEST_CASE("conformal family type reproduces its base") {
  ConformalFamily fam{charts::torus_conformal(3, kTwoPi, "0.1*cos(x1)"),
                      Expression::parse("sin(x2)", {"x1", "x2", "x3"})};
  Chart base = fam.at(0.0);
  std::vector<double> p = {1.0, 2.0, 3.0};
  CHECK(base.metric_entry(0, 0).eval_value(p) ==
        fam.base.metric_entry(0, 0).eval_value(p));
}
