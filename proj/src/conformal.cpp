#include "curvlab/conformal.hpp"

#include <cmath>

namespace curvlab {

namespace {

double max_abs(const PointTensor& t) { return t.max_abs_value(); }

std::vector<double> to_vec(std::span<const double> p) {
  return std::vector<double>(p.begin(), p.end());
}

}  // namespace

Chart ConformalFamily::at(double t) const { return rescale(base, eta, t); }

Chart rescale(const Chart& chart, const Expression& eta, double t) {
  if (t == 0.0) return chart;
  const int n = chart.dim();
  Expression factor = eta.scaled(2.0 * t).exp_of();
  std::vector<Expression> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries.push_back(factor * chart.metric_entry(i, j));
  std::vector<bool> periodic(n);
  for (int a = 0; a < n; ++a) periodic[a] = chart.periodic(a);
  return Chart(chart.coords(), chart.box(), periodic, std::move(entries),
               chart.label() + " rescaled", chart.kind());
}

PointTensor field_jets(const VectorFieldSpec& X, std::span<const double> point,
                       int order) {
  const int n = static_cast<int>(X.components.size());
  PointTensor out(JetLayout::get(n, order), {Variance::Contra}, to_vec(point));
  for (int i = 0; i < n; ++i) out.at({i}) = X.components[i].eval_jet(point, order);
  return out;
}

PointTensor lie_metric(CurvatureState& state, const VectorFieldSpec& X) {
  const int n = state.dim();
  const int order = state.metric_order();
  if (order < 1) throw OrderExhausted("lie_metric needs metric jets of order 1");
  PointTensor Xu = field_jets(X, state.point(), order);
  PointTensor Xl = lower_slot(Xu, 0, state.metric());
  PointTensor dX = covariant_derivative(Xl, state.christoffel());
  PointTensor out(dX.layout(), {Variance::Co, Variance::Co}, state.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& acc = out.at({i, j});
      acc += dX.at({j, i});
      acc += dX.at({i, j});
    }
  return out;
}

Jet divergence(CurvatureState& state, const VectorFieldSpec& X) {
  const int n = state.dim();
  const int order = state.metric_order();
  if (order < 1) throw OrderExhausted("divergence needs metric jets of order 1");
  PointTensor Xu = field_jets(X, state.point(), order);
  std::vector<Jet> g(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i * n + j] = state.metric().at({i, j});
  Jet root = jet_sqrt(jet_mat_det(std::move(g), n));
  Jet acc = Jet::zero(JetLayout::get(n, order - 1));
  for (int i = 0; i < n; ++i) {
    Jet hx = root * Xu.at({i});
    acc += hx.derivative(i);
  }
  return acc / root;
}

PointTensor ckv_residual_tensor(CurvatureState& state, const VectorFieldSpec& X) {
  const int n = state.dim();
  PointTensor L = lie_metric(state, X);
  Jet div = divergence(state, X);
  PointTensor out(L.layout(), {Variance::Co, Variance::Co}, state.point());
  const double c = 2.0 / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& acc = out.at({i, j});
      acc += L.at({i, j});
      acc.add_mul(div, state.metric().at({i, j}), -c);
    }
  return out;
}

double ckv_relative_residual(const Chart& chart, const VectorFieldSpec& X,
                             std::span<const double> point) {
  CurvatureState state(chart, to_vec(point), 1);
  PointTensor L = lie_metric(state, X);
  Jet div = divergence(state, X);
  const int n = chart.dim();
  double res = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double trace_part = (2.0 / n) * div.value() * state.metric().at({i, j}).value();
      double lij = L.at({i, j}).value();
      res = std::max(res, std::abs(lij - trace_part));
      scale = std::max({scale, std::abs(lij), std::abs(trace_part)});
    }
  return res / scale;
}

std::vector<VectorFieldSpec> builtin_fields(ChartKind kind, int dim) {
  std::vector<VectorFieldSpec> out;
  auto make = [&](const std::vector<std::string>& comps,
                  const std::vector<std::string>& coords, std::string label,
                  VectorFieldSpec::Tag tag) {
    VectorFieldSpec f;
    for (const auto& c : comps) f.components.push_back(Expression::parse(c, coords));
    f.label = std::move(label);
    f.tag = tag;
    out.push_back(std::move(f));
  };

  if (kind == ChartKind::SpherePolar) {
    std::vector<std::string> coords;
    for (int i = 1; i < dim; ++i) coords.push_back("t" + std::to_string(i));
    coords.push_back("phi");
    std::vector<std::string> comps(dim, "0");
    comps[0] = "-sin(t1)";
    make(comps, coords, "sphere_ckv", VectorFieldSpec::Tag::ConformalKilling);
    std::fill(comps.begin(), comps.end(), "0");
    comps[dim - 1] = "1";
    make(comps, coords, "azimuthal_rotation", VectorFieldSpec::Tag::Killing);
    return out;
  }

  std::vector<std::string> coords;
  for (int i = 1; i <= dim; ++i) coords.push_back("x" + std::to_string(i));

  if (kind == ChartKind::Torus) {
    for (int a = 0; a < dim; ++a) {
      std::vector<std::string> comps(dim, "0");
      comps[a] = "1";
      make(comps, coords, "translation_x" + std::to_string(a + 1),
           VectorFieldSpec::Tag::ConformalKilling);
    }
    return out;
  }

  if (kind == ChartKind::FlatBox) {
    for (int a = 0; a < dim; ++a) {
      std::vector<std::string> comps(dim, "0");
      comps[a] = "1";
      make(comps, coords, "translation_x" + std::to_string(a + 1),
           VectorFieldSpec::Tag::Killing);
    }
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b) {
        std::vector<std::string> comps(dim, "0");
        comps[a] = "-x" + std::to_string(b + 1);
        comps[b] = "x" + std::to_string(a + 1);
        make(comps, coords,
             "rotation_x" + std::to_string(a + 1) + "_x" + std::to_string(b + 1),
             VectorFieldSpec::Tag::Killing);
      }
    {
      std::vector<std::string> comps(dim);
      for (int a = 0; a < dim; ++a) comps[a] = "x" + std::to_string(a + 1);
      make(comps, coords, "dilation", VectorFieldSpec::Tag::ConformalKilling);
    }
    std::string norm2;
    for (int a = 0; a < dim; ++a) {
      if (a) norm2 += " + ";
      norm2 += "x" + std::to_string(a + 1) + "^2";
    }
    for (int k = 0; k < dim; ++k) {
      std::vector<std::string> comps(dim);
      std::string xk = "x" + std::to_string(k + 1);
      for (int a = 0; a < dim; ++a) {
        std::string xa = "x" + std::to_string(a + 1);
        if (a == k)
          comps[a] = "2*" + xk + "*" + xk + " - (" + norm2 + ")";
        else
          comps[a] = "2*" + xa + "*" + xk;
      }
      make(comps, coords, "special_conformal_x" + std::to_string(k + 1),
           VectorFieldSpec::Tag::ConformalKilling);
    }
    return out;
  }

  throw UnknownChartKind("no builtin fields for this chart kind");
}

// ---------------------------------------------------------------------------
// variation residuals

namespace {

struct FdPair {
  std::vector<double> d_h, d_h2, rhs;
  double scale = 1.0;
};

VariationResult finish_fd(const FdPair& fd) {
  VariationResult out;
  double res_h = 0.0, res_h2 = 0.0, res_ex = 0.0, dmax = 0.0;
  for (std::size_t i = 0; i < fd.rhs.size(); ++i) {
    res_h = std::max(res_h, std::abs(fd.d_h[i] - fd.rhs[i]));
    res_h2 = std::max(res_h2, std::abs(fd.d_h2[i] - fd.rhs[i]));
    double ex = (4.0 * fd.d_h2[i] - fd.d_h[i]) / 3.0;
    res_ex = std::max(res_ex, std::abs(ex - fd.rhs[i]));
    dmax = std::max(dmax, std::abs(fd.d_h[i]));
  }
  double scale = std::max(fd.scale, std::max(1.0, dmax));
  out.residual = res_h / scale;
  out.residual_half = res_h2 / scale;
  out.residual_extrap = res_ex / scale;
  out.scale = scale;
  const double floor = 1e-10;
  if (out.residual < floor && out.residual_half < floor) {
    out.saturated = true;  // quantity is (numerically) linear in t
  } else if (out.residual_half > 0.0) {
    out.fd_order = std::log2(out.residual / out.residual_half);
  }
  return out;
}

// central differences of a chart-level scalar/tensor functional
template <typename F>
FdPair central_fd(const Chart& chart, const Expression& eta, double h, F&& eval) {
  FdPair fd;
  auto at = [&](double t) { return eval(rescale(chart, eta, t)); };
  std::vector<double> p1 = at(h), m1 = at(-h), p2 = at(h / 2), m2 = at(-h / 2);
  fd.d_h.resize(p1.size());
  fd.d_h2.resize(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    fd.d_h[i] = (p1[i] - m1[i]) / (2.0 * h);
    fd.d_h2[i] = (p2[i] - m2[i]) / h;
  }
  return fd;
}

std::vector<double> tensor_values(const PointTensor& t) {
  std::vector<double> v(t.component_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.flat_at(i).value();
  return v;
}

}  // namespace

VariationResult variation_residual(VariationKind kind, const Chart& chart,
                                   const Expression& eta, const VectorFieldSpec* X,
                                   std::span<const double> point,
                                   const VariationParams& params) {
  const int n = chart.dim();
  const std::vector<double> p = to_vec(point);
  const double h = params.h;

  switch (kind) {
    case VariationKind::SchoutenDot: {
      // d/dt|0 (g_t^{-1} A(g_t)) = -Hess(eta)^i_j - 2 eta (g^{-1}A)^i_j
      FdPair fd = central_fd(chart, eta, h, [&](const Chart& ct) {
        CurvatureState s(ct, p, 2);
        return tensor_values(s.schouten_mixed());
      });
      CurvatureState base(chart, p, 2);
      Jet ej = eta.eval_jet(p, 2);
      PointTensor deta(JetLayout::get(n, 1), {Variance::Co}, p);
      for (int i = 0; i < n; ++i) deta.at({i}) = ej.derivative(i);
      PointTensor hess = covariant_derivative(deta, base.christoffel());
      PointTensor hess_mixed = raise_slot(hess, 0, base.metric_inv());
      fd.rhs.resize(static_cast<std::size_t>(n) * n);
      const double ev = ej.value();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          fd.rhs[i * n + j] = -hess_mixed.at({i, j}).value() -
                              2.0 * ev * base.schouten_mixed().at({i, j}).value();
      return finish_fd(fd);
    }

    case VariationKind::DivDot: {
      if (!X) throw Error("div variation needs a vector field");
      FdPair fd = central_fd(chart, eta, h, [&](const Chart& ct) {
        CurvatureState s(ct, p, 1);
        return std::vector<double>{divergence(s, *X).value()};
      });
      Jet ej = eta.eval_jet(p, 1);
      double xdot = 0.0;
      for (int i = 0; i < n; ++i)
        xdot += X->components[i].eval_value(p) * ej.derivative(i).value();
      fd.rhs = {n * xdot};
      return finish_fd(fd);
    }

    case VariationKind::RiemannConformal: {
      // R^ij_kl(g_t) = e^{-2 t eta} (R^ij_kl - (alpha (*) g)^ij_kl),
      // alpha_ij = w_ij - w_i w_j + |grad w|^2/2 g_ij with w = t eta.
      const double t = params.t;
      CurvatureState base(chart, p, 2);
      CurvatureState resc(rescale(chart, eta, t), p, 2);
      Jet wj = eta.eval_jet(p, 2) * t;
      PointTensor dw(JetLayout::get(n, 1), {Variance::Co}, p);
      for (int i = 0; i < n; ++i) dw.at({i}) = wj.derivative(i);
      PointTensor hess = covariant_derivative(dw, base.christoffel());
      PointTensor dw_up = raise_slot(dw, 0, base.metric_inv());
      Jet grad2 = Jet::zero(dw_up.at({0}).layout());
      for (int i = 0; i < n; ++i) grad2.add_mul(dw_up.at({i}), dw.at({i}));
      PointTensor alpha(hess.layout(), {Variance::Co, Variance::Co}, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet& acc = alpha.at({i, j});
          acc += hess.at({i, j});
          acc.add_mul(dw.at({i}), dw.at({j}), -1.0);
          acc.add_mul(grad2, base.metric().at({i, j}), 0.5);
        }
      PointTensor kn = kulkarni_nomizu(alpha, base.metric());
      PointTensor kn_uu =
          raise_slot(raise_slot(kn, 0, base.metric_inv()), 1, base.metric_inv());
      const double damp = std::exp(-2.0 * t * eta.eval_value(p));
      VariationResult out;
      double res = 0.0, scale = 1.0;
      const PointTensor& Rt = resc.riemann_uu();
      const PointTensor& R0 = base.riemann_uu();
      for (std::size_t f = 0; f < Rt.component_count(); ++f) {
        double lhs = Rt.flat_at(f).value();
        double rhs = damp * (R0.flat_at(f).value() - kn_uu.flat_at(f).value());
        res = std::max(res, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
      }
      out.residual = res / scale;
      out.residual_half = out.residual;
      out.residual_extrap = out.residual;
      out.scale = scale;
      return out;
    }

    case VariationKind::BachDot: {
      if (n < 4) throw DimensionError("Bach variation needs n >= 4");
      FdPair fd = central_fd(chart, eta, h, [&](const Chart& ct) {
        CurvatureState s(ct, p, 4);
        return tensor_values(s.bach());
      });
      CurvatureState base(chart, p, 4);
      Jet ej = eta.eval_jet(p, 1);
      PointTensor deta(JetLayout::get(n, 0), {Variance::Co}, p);
      for (int i = 0; i < n; ++i) deta.at({i}) = ej.derivative(i);
      PointTensor deta_up = raise_slot(deta, 0, base.metric_inv());
      const PointTensor& C = base.cotton();
      const PointTensor& B = base.bach();
      const double ev = ej.value();
      fd.rhs.resize(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k)
            s += (C.at({i, j, k}).value() + C.at({j, i, k}).value()) *
                 deta_up.at({k}).value();
          fd.rhs[i * n + j] = (n - 4) * s - 2.0 * ev * B.at({i, j}).value();
        }
      return finish_fd(fd);
    }

    case VariationKind::V6Variation: {
      if (n < 5) throw DimensionError("v^(6) variation needs n >= 5");
      FdPair fd = central_fd(chart, eta, h, [&](const Chart& ct) {
        CurvatureState s(ct, p, 4);
        return std::vector<double>{s.v2k(3).value()};
      });
      CurvatureState base(chart, p, 5);
      Jet ej = eta.eval_jet(p, 2);
      const double ev = ej.value();
      // S_ij = T^(2)_ij/8 + B_ij/(24(n-4)); rhs = -6 v6 eta + grad^j(S_ij grad^i eta)
      PointTensor T2 = base.newton_lowered(2);
      const PointTensor& B = base.bach();
      PointTensor S(B.layout(), {Variance::Co, Variance::Co}, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet& acc = S.at({i, j});
          acc.add_scaled(T2.at({i, j}), 0.125);
          acc.add_scaled(B.at({i, j}), 1.0 / (24.0 * (n - 4)));
        }
      PointTensor deta(JetLayout::get(n, 1), {Variance::Co}, p);
      for (int i = 0; i < n; ++i) deta.at({i}) = ej.derivative(i);
      PointTensor deta_up = raise_slot(deta, 0, base.metric_inv());
      PointTensor w(B.layout(), {Variance::Co}, p);
      for (int j = 0; j < n; ++j) {
        Jet& acc = w.at({j});
        for (int i = 0; i < n; ++i) acc.add_mul(S.at({i, j}), deta_up.at({i}));
      }
      PointTensor dwt = covariant_derivative(w, base.christoffel());
      PointTensor divw = contract(raise_slot(dwt, 1, base.metric_inv()), 0, 1);
      fd.rhs = {-6.0 * base.v2k(3).value() * ev + divw.flat_at(0).value()};
      return finish_fd(fd);
    }

    case VariationKind::G2rVariation: {
      if (!X) throw Error("G_2r variation needs a conformal Killing field");
      const int r = params.r;
      if (2 * r > n) throw DimensionError("G_2r variation needs 2r <= n");
      CurvatureState base(chart, p, 3);
      PointTensor gradG = base.grad_gauss_bonnet(r);
      double lie = 0.0;
      for (int i = 0; i < n; ++i)
        lie += X->components[i].eval_value(p) * gradG.at({i}).value();
      Jet div = divergence(base, *X);
      const double G = base.gauss_bonnet(r).value();
      const double term2 = (2.0 * r / n) * div.value() * G;
      // (4r(n-2r+1)/n) grad_j (P_{r-1} i^j (div X)^i)
      PointTensor ddiv(JetLayout::get(n, div.order() - 1), {Variance::Co}, p);
      for (int i = 0; i < n; ++i) ddiv.at({i}) = div.derivative(i);
      PointTensor ddiv_up = raise_slot(ddiv, 0, base.metric_inv());
      const PointTensor& P = base.p_tensor(r - 1);
      LayoutPtr vlayout =
          P.order() <= ddiv_up.order() ? P.layout() : ddiv_up.layout();
      PointTensor v(vlayout, {Variance::Contra}, p);
      for (int j = 0; j < n; ++j) {
        Jet& acc = v.at({j});
        for (int i = 0; i < n; ++i) acc.add_mul(P.at({i, j}), ddiv_up.at({i}));
      }
      PointTensor dv = covariant_derivative(v, base.christoffel());
      PointTensor divv = contract(dv, 0, 1);
      const double term3 =
          (4.0 * r * (n - 2 * r + 1) / n) * divv.flat_at(0).value();
      VariationResult out;
      double scale = std::max({1.0, std::abs(lie), std::abs(term2), std::abs(term3)});
      out.residual = std::abs(lie + term2 + term3) / scale;
      out.residual_half = out.residual;
      out.residual_extrap = out.residual;
      out.scale = scale;
      return out;
    }
  }
  throw std::logic_error("variation_residual: bad kind");
}

double v6_divergence_identity_residual(const Chart& chart, const VectorFieldSpec& X,
                                       std::span<const double> point) {
  const int n = chart.dim();
  if (n < 5) throw DimensionError("v^(6) identity needs n >= 5");
  const std::vector<double> p = to_vec(point);
  CurvatureState s(chart, p, 5);

  // <X, grad v6>
  PointTensor gv6 = s.grad_v6();
  double xdotv = 0.0;
  std::vector<double> xv(n);
  for (int i = 0; i < n; ++i) {
    xv[i] = X.components[i].eval_value(p);
    xdotv += xv[i] * gv6.at({i}).value();
  }

  // div(v6 X)
  const Jet& v6 = s.v2k(3);
  PointTensor u(v6.layout(), {Variance::Contra}, p);
  PointTensor Xu = field_jets(X, p, s.metric_order());
  for (int i = 0; i < n; ++i) u.at({i}) = v6 * Xu.at({i});
  PointTensor du = covariant_derivative(u, s.christoffel());
  double div_v6x = contract(du, 0, 1).flat_at(0).value();

  // grad_i (S^ij (div X)_j), S as in the v6 variation
  PointTensor T2 = s.newton_lowered(2);
  const PointTensor& B = s.bach();
  PointTensor S(B.layout(), {Variance::Co, Variance::Co}, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& acc = S.at({i, j});
      acc.add_scaled(T2.at({i, j}), 0.125);
      acc.add_scaled(B.at({i, j}), 1.0 / (24.0 * (n - 4)));
    }
  PointTensor Suu = raise_slot(raise_slot(S, 0, s.metric_inv()), 1, s.metric_inv());
  Jet div = divergence(s, X);
  PointTensor ddiv(JetLayout::get(n, div.order() - 1), {Variance::Co}, p);
  for (int j = 0; j < n; ++j) ddiv.at({j}) = div.derivative(j);
  LayoutPtr vlayout = Suu.order() <= ddiv.order() ? Suu.layout() : ddiv.layout();
  PointTensor v(vlayout, {Variance::Contra}, p);
  for (int i = 0; i < n; ++i) {
    Jet& acc = v.at({i});
    for (int j = 0; j < n; ++j) acc.add_mul(Suu.at({i, j}), ddiv.at({j}));
  }
  double div_sv = contract(covariant_derivative(v, s.christoffel()), 0, 1)
                      .flat_at(0)
                      .value();

  const double t1 = (1.0 - 6.0 / n) * xdotv;
  const double t2 = (6.0 / n) * div_v6x;
  const double t3 = -(1.0 / n) * div_sv;
  const double scale = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
  return std::abs(t1 + t2 + t3) / scale;
}

}  // namespace curvlab
