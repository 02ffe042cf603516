#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvlab/curvature.hpp"

namespace curvlab {

struct VectorFieldSpec {
  enum class Tag { Killing, ConformalKilling, Generic };
  std::vector<Expression> components;  // X^i, one per coordinate
  std::string label;
  Tag tag = Tag::Generic;
};

/// Conformal family g_t = exp(2 t eta) g.
struct ConformalFamily {
  Chart base;
  Expression eta;
  Chart at(double t) const;
};

/// New chart with metric entries exp(2 t eta) * g_ij as composed
/// expressions; domain and periodicity unchanged. t = 0 returns the chart
/// unchanged.
Chart rescale(const Chart& chart, const Expression& eta, double t);

/// X^i evaluated as jets (rank-1 contravariant).
PointTensor field_jets(const VectorFieldSpec& X, std::span<const double> point,
                       int order);

/// (L_X g)_ij = grad_i X_j + grad_j X_i with X lowered by g.
PointTensor lie_metric(CurvatureState& state, const VectorFieldSpec& X);

/// div_g X = (1/sqrt(det g)) d_i(sqrt(det g) X^i), returned as a jet of
/// order K-1 so its gradient is available.
Jet divergence(CurvatureState& state, const VectorFieldSpec& X);

/// L_X g - (2 div X / n) g at the state's point.
PointTensor ckv_residual_tensor(CurvatureState& state, const VectorFieldSpec& X);

/// max-norm of the residual relative to max(1, |L_X g|, |(2 div X/n) g|).
double ckv_relative_residual(const Chart& chart, const VectorFieldSpec& X,
                             std::span<const double> point);

/// Curated fields per chart kind: sphere_polar gets the gradient CKV
/// -sin(t1) d/dt1 and the azimuthal rotation; torus gets translations;
/// flat_box gets translations, rotations, the dilation and special
/// conformal fields. Throws UnknownChartKind otherwise.
std::vector<VectorFieldSpec> builtin_fields(ChartKind kind, int dim);

enum class VariationKind {
  SchoutenDot,       // d/dt (g_t^{-1} A(g_t)) + Hess(eta) + 2 eta g^{-1}A = 0
  DivDot,            // d/dt div_{g_t} X - n <X, grad eta> = 0
  RiemannConformal,  // exact law for R^ij_kl(g_t) at finite t
  BachDot,           // d/dt B(g_t) - (n-4)(C_ijk + C_jik) grad^k eta + 2 eta B = 0
  V6Variation,       // d/dt v6(g_t) + 6 v6 eta - div-form term = 0
  G2rVariation,      // L_X G_2r chain (pointwise, X conformal Killing)
};

struct VariationResult {
  double residual = 0.0;         // residual at step h (or the exact-law residual)
  double residual_half = 0.0;    // at h/2 (derivative kinds)
  double residual_extrap = 0.0;  // Richardson-extrapolated residual
  std::optional<double> fd_order;  // log2 ratio; empty when pointwise/saturated
  bool saturated = false;        // both FD residuals at the roundoff floor
  double scale = 1.0;
};

struct VariationParams {
  double h = 1e-3;  // central-difference step in t
  double t = 0.3;   // finite t for the exact Riemann law
  int r = 2;        // G_2r variation
};

VariationResult variation_residual(VariationKind kind, const Chart& chart,
                                   const Expression& eta, const VectorFieldSpec* X,
                                   std::span<const double> point,
                                   const VariationParams& params = {});

/// Pointwise k=3 divergence identity for a conformal Killing field:
/// (1 - 6/n) <X, grad v6> + (6/n) div(v6 X) - (1/n) grad_i(S^ij (div X)_j)
/// with S = T^(2)/8 + B/(24(n-4)). Returns the residual over a scale of
/// max(1, term magnitudes).
double v6_divergence_identity_residual(const Chart& chart, const VectorFieldSpec& X,
                                       std::span<const double> point);

}  // namespace curvlab
