#include "curvlab/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/parallel.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

double rel(double residual, double scale) { return residual / std::max(1.0, scale); }

/// Runs a per-point residual function over the context sample points in
/// parallel and folds max/mean in point order.
TaskResult pointwise(TaskContext& ctx,
                     const std::function<double(const std::vector<double>&)>& fn) {
  TaskResult out;
  std::vector<double> res(ctx.points.size());
  parallel_for(ctx.points.size(), ctx.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) res[i] = fn(ctx.points[i]);
  });
  double sum = 0.0;
  for (double r : res) {
    out.residual_max = std::max(out.residual_max, r);
    sum += r;
  }
  out.residual_mean = res.empty() ? 0.0 : sum / res.size();
  return out;
}

TaskResult from_variations(TaskContext& ctx, VariationKind kind,
                           const VariationParams& params, bool needs_field) {
  const TaskConfig& cfg = *ctx.cfg;
  if (!cfg.eta) throw Error("variation task needs [conformal] eta");
  if (needs_field && !cfg.field) throw Error("variation task needs a vector field");
  TaskResult out;
  std::vector<VariationResult> res(ctx.points.size());
  parallel_for(ctx.points.size(), ctx.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      res[i] = variation_residual(kind, cfg.chart, *cfg.eta,
                                  cfg.field ? &*cfg.field : nullptr, ctx.points[i],
                                  params);
  });
  double sum = 0.0;
  bool all_saturated = true;
  std::optional<double> worst_order;
  for (const auto& r : res) {
    out.residual_max = std::max(out.residual_max, r.residual_extrap);
    sum += r.residual_extrap;
    out.ladder = {r.residual, r.residual_half};  // representative pair
    if (!r.saturated) {
      all_saturated = false;
      if (r.fd_order &&
          (!worst_order || std::abs(*r.fd_order - 2.0) > std::abs(*worst_order - 2.0)))
        worst_order = r.fd_order;
    }
  }
  out.residual_mean = res.empty() ? 0.0 : sum / res.size();
  if (!all_saturated) out.fd_order = worst_order;
  return out;
}

bool fd_order_ok(const TaskResult& r) {
  if (!r.fd_order) return true;  // saturated at the roundoff floor or exact law
  return *r.fd_order >= 1.9 && *r.fd_order <= 2.1;
}

TaskResult from_kw(const TaskRequest& req, TaskContext& ctx, KwQuantity q) {
  const TaskConfig& cfg = *ctx.cfg;
  if (!cfg.field) throw Error("Kazdan-Warner task needs a vector field");
  KwResult kw = kw_integral(cfg.chart, *cfg.field, q, cfg.quadrature, ctx.threads);
  TaskResult out;
  out.ladder = kw.ratio;
  out.residual_max = kw.final_ratio;
  double sum = 0.0;
  for (double r : kw.ratio) sum += r;
  out.residual_mean = kw.ratio.empty() ? 0.0 : sum / kw.ratio.size();
  out.normalization = kw.final_normalizer;
  (void)req;
  return out;
}

bool ladder_ok(const std::vector<double>& ratios, double tol) {
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] > ratios[i - 1] && ratios[i] > tol) return false;
  return true;
}

// --------------------------------------------------------------------------
// pointwise residual functions

double decomposition_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 2);
  PointTensor kn = kulkarni_nomizu(s.schouten(), s.metric());
  double res = 0.0;
  for (std::size_t f = 0; f < kn.component_count(); ++f)
    res = std::max(res, std::abs(s.riemann().flat_at(f).value() -
                                 s.weyl().flat_at(f).value() - kn.flat_at(f).value()));
  return rel(res, s.riemann().max_abs_value());
}

double riemann_symmetries_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 2);
  const PointTensor& R = s.riemann();
  const int n = s.dim();
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = R.at({i, j, k, l}).value();
          res = std::max(res, std::abs(v + R.at({j, i, k, l}).value()));
          res = std::max(res, std::abs(v + R.at({i, j, l, k}).value()));
          res = std::max(res, std::abs(v - R.at({k, l, i, j}).value()));
        }
  return rel(res, R.max_abs_value());
}

double bianchi_first_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 2);
  const PointTensor& R = s.riemann();
  const int n = s.dim();
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          res = std::max(res, std::abs(R.at({i, j, k, l}).value() +
                                       R.at({i, k, l, j}).value() +
                                       R.at({i, l, j, k}).value()));
  return rel(res, R.max_abs_value());
}

double weyl_trace_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 2);
  const PointTensor& W = s.weyl();
  const PointTensor& gi = s.metric_inv();
  const int n = s.dim();
  double res = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double t1 = 0.0, t2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          t1 += gi.at({i, j}).value() * W.at({i, a, j, b}).value();
          t2 += gi.at({i, j}).value() * W.at({a, i, b, j}).value();
        }
      res = std::max({res, std::abs(t1), std::abs(t2)});
    }
  return rel(res, std::max(W.max_abs_value(), s.riemann().max_abs_value()));
}

double schouten_reconstruction_residual(const Chart& chart,
                                        const std::vector<double>& p) {
  CurvatureState s(chart, p, 2);
  const int n = s.dim();
  Jet trA = Jet::zero(s.schouten_mixed().at({0, 0}).layout());
  for (int i = 0; i < n; ++i) trA += s.schouten_mixed().at({i, i});
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double rhs = (n - 2) * s.schouten().at({i, j}).value() +
                   trA.value() * s.metric().at({i, j}).value();
      res = std::max(res, std::abs(s.ricci().at({i, j}).value() - rhs));
    }
  return rel(res, s.ricci().max_abs_value());
}

double second_bianchi_residual(const Chart& chart, const std::vector<double>& p) {
  // div A = d(tr A): the contracted second Bianchi identity in Schouten form
  CurvatureState s(chart, p, 3);
  const int n = s.dim();
  PointTensor da = covariant_derivative(s.schouten(), s.christoffel());
  PointTensor grad_tr = s.grad_sigma(1);
  double res = 0.0, scale = 1.0;
  for (int j = 0; j < n; ++j) {
    double lhs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        lhs += s.metric_inv().at({i, k}).value() * da.at({i, j, k}).value();
    double rhs = grad_tr.at({j}).value();
    res = std::max(res, std::abs(lhs - rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  return res / scale;
}

double cotton_trace_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 3);
  const int n = s.dim();
  const PointTensor& C = s.cotton();
  const PointTensor& gi = s.metric_inv();
  double res = 0.0;
  for (int k = 0; k < n; ++k) {
    double t1 = 0.0, t2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        t1 += gi.at({i, j}).value() * C.at({i, j, k}).value();
        t2 += gi.at({i, j}).value() * C.at({i, k, j}).value();
      }
    res = std::max({res, std::abs(t1), std::abs(t2)});
  }
  return rel(res, C.max_abs_value());
}

double prop_i_residual(const Chart& chart, const std::vector<double>& p, int kmax) {
  // k sigma_k = <T^(k-1), A>, paired as lowered against raised tensors
  CurvatureState s(chart, p, 2);
  const int n = s.dim();
  double res = 0.0;
  for (int k = 1; k <= std::min(kmax, n - 1); ++k) {
    PointTensor T = s.newton_lowered(k - 1);
    const PointTensor& Auu = s.schouten_uu();
    double dot = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dot += T.at({i, j}).value() * Auu.at({i, j}).value();
    double lhs = k * s.sigma(k).value();
    res = std::max(res, rel(std::abs(dot - lhs), std::abs(lhs)));
  }
  return res;
}

double prop_ii_residual(const Chart& chart, const std::vector<double>& p, int kmax) {
  // trace T^(k) = (n-k) sigma_k
  CurvatureState s(chart, p, 2);
  const int n = s.dim();
  double res = 0.0;
  for (int k = 1; k <= std::min(kmax, n - 1); ++k) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += s.newton_mixed(k).at({i, i}).value();
    double rhs = (n - k) * s.sigma(k).value();
    res = std::max(res, rel(std::abs(tr - rhs), std::abs(rhs)));
  }
  return res;
}

double prop_iii_residual(const Chart& chart, const std::vector<double>& p) {
  // grad^l W_lijk = -(n-3) C_ijk
  CurvatureState s(chart, p, 4);
  const int n = s.dim();
  const PointTensor& D = s.weyl_divergence();
  const PointTensor& C = s.cotton();
  double res = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = D.at({i, j, k}).value();
        double rhs = -(n - 3) * C.at({i, j, k}).value();
        res = std::max(res, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
      }
  return res / scale;
}

double lemma_i_residual(const Chart& chart, const std::vector<double>& p) {
  // div T^(2) + A:C = 0
  CurvatureState s(chart, p, 5);
  PointTensor divT = s.div_newton2();
  PointTensor ac = s.schouten_dot_cotton();
  const int n = s.dim();
  double res = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double v = divT.at({i}).value() + ac.at({i}).value();
    res = std::max(res, std::abs(v));
    scale = std::max({scale, std::abs(divT.at({i}).value()), std::abs(ac.at({i}).value())});
  }
  return res / scale;
}

double lemma_ii_residual(const Chart& chart, const std::vector<double>& p) {
  // div B = (n-4) A:C
  CurvatureState s(chart, p, 5);
  PointTensor divB = s.div_bach();
  PointTensor ac = s.schouten_dot_cotton();
  const int n = s.dim();
  double res = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double lhs = divB.at({i}).value();
    double rhs = (n - 4) * ac.at({i}).value();
    res = std::max(res, std::abs(lhs - rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  return res / scale;
}

double lemma_4_1_residual(const Chart& chart, const std::vector<double>& p, int r) {
  CurvatureState s(chart, p, 5);
  PointTensor div = s.div_p_tensor(r);
  double res = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    res = std::max(res, std::abs(div.at({i}).value()));
  return rel(res, s.p_tensor(r).max_abs_value());
}

double p_trace_residual(const Chart& chart, const std::vector<double>& p, int r) {
  CurvatureState s(chart, p, 2);
  const int n = s.dim();
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += s.p_tensor(r).at({i, i}).value();
  double rhs = (n - 2 * r) * s.gauss_bonnet(r).value();
  return rel(std::abs(tr - rhs), std::max(std::abs(tr), std::abs(rhs)));
}

double g2_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 2);
  double g2 = s.gauss_bonnet(1).value();
  double r2 = 2.0 * s.scalar_curvature().value();
  return std::abs(g2 - r2) / std::max(1.0, std::abs(r2));
}

double gb_lcf_residual(const Chart& chart, const std::vector<double>& p, int r) {
  // locally conformally flat: G_2r = 4^r (n-r)! r! / (n-2r)! sigma_r
  CurvatureState s(chart, p, 2);
  const int n = s.dim();
  double c = std::pow(4.0, r) * std::tgamma(n - r + 1.0) * std::tgamma(r + 1.0) /
             std::tgamma(n - 2.0 * r + 1.0);
  double lhs = s.gauss_bonnet(r).value();
  double rhs = c * s.sigma(r).value();
  return rel(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
}

double v6_lcf_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 4);
  double lhs = s.v2k(3).value();
  double rhs = -s.sigma(3).value() / 8.0;
  return rel(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
}

double metric_compat_residual(const Chart& chart, const std::vector<double>& p) {
  CurvatureState s(chart, p, 1);
  PointTensor dg = covariant_derivative(s.metric(), s.christoffel());
  return rel(dg.max_abs_value(), s.metric().max_abs_value());
}

}  // namespace

std::vector<std::vector<double>> sample_points(const Chart& chart,
                                               std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts(count);
  for (auto& p : pts) {
    p.resize(chart.dim());
    for (int a = 0; a < chart.dim(); ++a) {
      double lo = chart.box()[a][0], hi = chart.box()[a][1];
      p[a] = lo + (0.08 + 0.84 * rng.next_double()) * (hi - lo);
    }
  }
  return pts;
}

const std::vector<TaskDef>& task_catalog() {
  static const std::vector<TaskDef> catalog = [] {
    std::vector<TaskDef> c;
    auto add = [&](const char* name, const char* cite, int order, double tol,
                   std::function<TaskResult(const TaskRequest&, TaskContext&)> run) {
      c.push_back({name, cite, order, tol, std::move(run)});
    };

    add("decomposition", "curvature decomposition, Rm = W + A (*) g", 2, 1e-10,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return decomposition_residual(ctx.cfg->chart, p);
          });
        });
    add("riemann_symmetries", "algebraic symmetries of Rm", 2, 1e-10,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return riemann_symmetries_residual(ctx.cfg->chart, p);
          });
        });
    add("bianchi_first", "first Bianchi identity", 2, 1e-10,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return bianchi_first_residual(ctx.cfg->chart, p);
          });
        });
    add("weyl_trace_free", "Weyl tensor is totally trace-free", 2, 1e-9,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return weyl_trace_residual(ctx.cfg->chart, p);
          });
        });
    add("schouten_reconstruction", "Ric = (n-2) A + tr(A) g", 2, 1e-11,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return schouten_reconstruction_residual(ctx.cfg->chart, p);
          });
        });
    add("bianchi_second_contracted", "div A = d tr A (second Bianchi)", 3, 1e-9,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return second_bianchi_residual(ctx.cfg->chart, p);
          });
        });
    add("cotton_traces", "Cotton tensor traces vanish", 3, 1e-9,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return cotton_trace_residual(ctx.cfg->chart, p);
          });
        });
    add("prop_3_1_i", "k sigma_k = <T^(k-1), A>", 2, 1e-10,
        [](const TaskRequest& req, TaskContext& ctx) {
          int k = req.param_int("k", 3);
          return pointwise(ctx, [&, k](const std::vector<double>& p) {
            return prop_i_residual(ctx.cfg->chart, p, k);
          });
        });
    add("prop_3_1_ii", "tr T^(k) = (n-k) sigma_k", 2, 1e-10,
        [](const TaskRequest& req, TaskContext& ctx) {
          int k = req.param_int("k", 3);
          return pointwise(ctx, [&, k](const std::vector<double>& p) {
            return prop_ii_residual(ctx.cfg->chart, p, k);
          });
        });
    add("prop_3_1_iii", "div W = -(n-3) C", 4, 1e-8,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return prop_iii_residual(ctx.cfg->chart, p);
          });
        });
    add("lemma_3_1_i", "div T^(2) = -A:C", 5, 1e-7,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return lemma_i_residual(ctx.cfg->chart, p);
          });
        });
    add("lemma_3_1_ii", "div B = (n-4) A:C", 5, 1e-7,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return lemma_ii_residual(ctx.cfg->chart, p);
          });
        });
    add("lemma_4_1_p_divergence", "P_r is divergence free", 5, 1e-7,
        [](const TaskRequest& req, TaskContext& ctx) {
          int r = req.param_int("r", 2);
          return pointwise(ctx, [&, r](const std::vector<double>& p) {
            return lemma_4_1_residual(ctx.cfg->chart, p, r);
          });
        });
    add("p_trace", "tr P_r = (n-2r) G_2r", 2, 1e-9,
        [](const TaskRequest& req, TaskContext& ctx) {
          int r = req.param_int("r", 2);
          return pointwise(ctx, [&, r](const std::vector<double>& p) {
            return p_trace_residual(ctx.cfg->chart, p, r);
          });
        });
    add("g2_identity", "G_2 = 2R", 2, 1e-12,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return g2_residual(ctx.cfg->chart, p);
          });
        });
    add("gauss_bonnet_lcf", "G_2r on conformally flat charts", 2, 1e-7,
        [](const TaskRequest& req, TaskContext& ctx) {
          int r = req.param_int("r", 2);
          return pointwise(ctx, [&, r](const std::vector<double>& p) {
            return gb_lcf_residual(ctx.cfg->chart, p, r);
          });
        });
    add("v6_lcf", "v^(6) = -sigma_3/8 on conformally flat charts", 4, 1e-8,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return v6_lcf_residual(ctx.cfg->chart, p);
          });
        });
    add("metric_compatibility", "covariant derivative of g vanishes", 1, 1e-11,
        [](const TaskRequest&, TaskContext& ctx) {
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return metric_compat_residual(ctx.cfg->chart, p);
          });
        });
    add("han06_v6", "pointwise divergence identity for v^(6)", 5, 1e-6,
        [](const TaskRequest&, TaskContext& ctx) {
          if (!ctx.cfg->field) throw Error("han06_v6 needs a vector field");
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return v6_divergence_identity_residual(ctx.cfg->chart, *ctx.cfg->field, p);
          });
        });
    add("ckv_check", "conformal Killing residual of the configured field", 1, 1e-8,
        [](const TaskRequest&, TaskContext& ctx) {
          if (!ctx.cfg->field) throw Error("ckv_check needs a vector field");
          return pointwise(ctx, [&](const std::vector<double>& p) {
            return ckv_relative_residual(ctx.cfg->chart, *ctx.cfg->field, p);
          });
        });

    add("var_schouten", "conformal variation of g_t^{-1} A(g_t)", 2, 1e-6,
        [](const TaskRequest&, TaskContext& ctx) {
          VariationParams params;
          params.h = ctx.cfg->fd_step;
          return from_variations(ctx, VariationKind::SchoutenDot, params, false);
        });
    add("var_divergence", "conformal variation of div_g X", 1, 1e-6,
        [](const TaskRequest&, TaskContext& ctx) {
          VariationParams params;
          params.h = ctx.cfg->fd_step;
          return from_variations(ctx, VariationKind::DivDot, params, true);
        });
    add("law_riemann_conformal", "exact conformal law for R^ij_kl", 2, 1e-9,
        [](const TaskRequest&, TaskContext& ctx) {
          TaskResult out;
          double sum = 0.0;
          int count = 0;
          for (double t : ctx.cfg->law_t) {
            VariationParams params;
            params.t = t;
            TaskResult one =
                from_variations(ctx, VariationKind::RiemannConformal, params, false);
            out.residual_max = std::max(out.residual_max, one.residual_max);
            out.ladder.push_back(one.residual_max);
            sum += one.residual_mean;
            ++count;
          }
          out.residual_mean = count ? sum / count : 0.0;
          return out;
        });
    add("var_bach", "conformal derivative of the Bach tensor", 4, 1e-6,
        [](const TaskRequest&, TaskContext& ctx) {
          VariationParams params;
          params.h = ctx.cfg->fd_step;
          return from_variations(ctx, VariationKind::BachDot, params, false);
        });
    add("var_v6", "conformal variation of v^(6)", 5, 1e-6,
        [](const TaskRequest&, TaskContext& ctx) {
          VariationParams params;
          params.h = ctx.cfg->fd_step;
          return from_variations(ctx, VariationKind::V6Variation, params, false);
        });
    add("var_g2r", "L_X G_2r variation chain", 3, 1e-6,
        [](const TaskRequest& req, TaskContext& ctx) {
          VariationParams params;
          params.r = req.param_int("r", 2);
          return from_variations(ctx, VariationKind::G2rVariation, params, true);
        });

    add("kw_sigma", "Kazdan-Warner integral for sigma_k", 3, 1e-7,
        [](const TaskRequest& req, TaskContext& ctx) {
          KwQuantity q{KwQuantity::Kind::Sigma, req.param_int("k", 1)};
          return from_kw(req, ctx, q);
        });
    add("kw_v6", "Kazdan-Warner integral for v^(6)", 5, 1e-4,
        [](const TaskRequest& req, TaskContext& ctx) {
          KwQuantity q{KwQuantity::Kind::V6, 3};
          return from_kw(req, ctx, q);
        });
    add("kw_g2r", "Kazdan-Warner integral for G_2r", 3, 1e-7,
        [](const TaskRequest& req, TaskContext& ctx) {
          KwQuantity q{KwQuantity::Kind::G2r, req.param_int("r", 2)};
          return from_kw(req, ctx, q);
        });
    add("invariance_v6_n6", "conformal invariance of the v^(6) functional, n = 6",
        4, 1e-4, [](const TaskRequest&, TaskContext& ctx) {
          const TaskConfig& cfg = *ctx.cfg;
          if (!cfg.eta) throw Error("invariance task needs [conformal] eta");
          if (!cfg.field) throw Error("invariance task needs a vector field");
          InvarianceResult inv = conformal_invariance_functional(
              cfg.chart, *cfg.eta, *cfg.field, cfg.quadrature, ctx.threads);
          TaskResult out;
          out.residual_max = inv.relative_difference;
          out.residual_mean = inv.relative_difference;
          out.ladder = {inv.base, inv.rescaled};
          out.normalization = std::abs(inv.base) + std::abs(inv.rescaled);
          return out;
        });

    return c;
  }();
  return catalog;
}

const TaskDef* find_task(const std::string& base_name) {
  for (const auto& t : task_catalog())
    if (base_name == t.name) return &t;
  return nullptr;
}

TaskResult run_task(const TaskRequest& req, TaskContext& ctx) {
  const TaskDef* def = find_task(req.base);
  TaskResult out;
  if (!def) {
    out.error = "unknown task '" + req.base + "'";
    out.tol = 0.0;
    return out;
  }
  out.tol = req.tol_override.value_or(def->default_tol);
  try {
    TaskResult r = def->run(req, ctx);
    r.tol = out.tol;
    const bool is_kw = req.base.rfind("kw_", 0) == 0;
    r.pass = r.residual_max <= r.tol && fd_order_ok(r) &&
             (!is_kw || ladder_ok(r.ladder, r.tol));
    return r;
  } catch (const std::exception& e) {
    out.error = e.what();
    out.pass = false;
    return out;
  }
}

}  // namespace curvlab
