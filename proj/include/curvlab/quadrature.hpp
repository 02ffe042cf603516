#pragma once

#include <functional>
#include <vector>

#include "curvlab/conformal.hpp"

namespace curvlab {

enum class AxisRule { GaussLegendre, TrapezoidPeriodic };

/// Tensor-product quadrature description. `nodes` are the per-axis base
/// counts; each ladder multiplier scales every axis (rounded, floor 4) and
/// produces one refinement level. The axisymmetric reduction evaluates the
/// integrand on the first polar axis of a sphere_polar chart only and
/// integrates the remaining angles in closed form.
struct QuadratureSpec {
  std::vector<AxisRule> rules;
  std::vector<int> nodes;
  bool axisymmetric_reduction = false;
  std::vector<double> ladder = {1.0, 2.0};

  void validate(const Chart& chart) const;
};

struct IntegralResult {
  std::vector<double> levels;  // one value per ladder level
  double value = 0.0;          // finest level
};

using ScalarField = std::function<double(std::span<const double>)>;

/// sum of weight * field(node) * sqrt(det g(node)) over interior nodes.
/// Gauss-Legendre nodes never touch the box boundary, so polar coordinate
/// degeneracies on the boundary are never evaluated.
IntegralResult integrate(const Chart& chart, const ScalarField& field,
                         const QuadratureSpec& spec, int threads = 0);

struct KwQuantity {
  enum class Kind { Sigma, V6, G2r };
  Kind kind = Kind::Sigma;
  int param = 1;  // k for sigma, r for G_2r

  int metric_order() const { return kind == Kind::V6 ? 5 : 3; }
};

struct KwResult {
  std::vector<double> integral;   // I per level
  std::vector<double> normalizer; // N per level
  std::vector<double> ratio;      // |I|/N per level (0 when degenerate)
  double final_ratio = 0.0;
  double final_normalizer = 0.0;
  bool degenerate = false;        // N vanishes (homogeneous configuration)
};

/// I = integral of <X, grad Q> dv_g and N = integral of |<X, grad Q>| dv_g.
/// X must pass the conformal Killing check on a sample lattice
/// (NotConformalKilling otherwise).
KwResult kw_integral(const Chart& chart, const VectorFieldSpec& X,
                     const KwQuantity& quantity, const QuadratureSpec& spec,
                     int threads = 0);

struct InvarianceResult {
  std::vector<double> base_levels;
  std::vector<double> rescaled_levels;
  double base = 0.0;
  double rescaled = 0.0;
  double relative_difference = 0.0;
};

/// F(g) = integral of div_g X * v6(g) dv_g, evaluated for g and exp(2 eta) g.
/// Dimension must be 6 (the n = 2k case for k = 3).
InvarianceResult conformal_invariance_functional(const Chart& chart,
                                                 const Expression& eta,
                                                 const VectorFieldSpec& X,
                                                 const QuadratureSpec& spec,
                                                 int threads = 0);

/// Gauss-Legendre nodes and weights on (lo, hi).
void gauss_legendre(int n, double lo, double hi, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace curvlab
