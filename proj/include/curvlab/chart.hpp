#pragma once

#include <array>
#include <string>
#include <vector>

#include "curvlab/expr.hpp"
#include "curvlab/tensor.hpp"

namespace curvlab {

enum class ChartKind { Generic, SpherePolar, Torus, FlatBox, ProductS2xS2 };

/// Coordinate box with a symmetric matrix of metric-component expressions.
class Chart {
 public:
  Chart() = default;
  Chart(std::vector<std::string> coords, std::vector<std::array<double, 2>> box,
        std::vector<bool> periodic, std::vector<Expression> metric_entries,
        std::string label = {}, ChartKind kind = ChartKind::Generic);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<std::array<double, 2>>& box() const { return box_; }
  bool periodic(int axis) const { return periodic_[axis]; }
  const std::string& label() const { return label_; }
  ChartKind kind() const { return kind_; }

  const Expression& metric_entry(int i, int j) const {
    return metric_[static_cast<std::size_t>(i) * dim() + j];
  }

  /// Metric components as jets of the requested order at a point.
  PointTensor metric_jets(std::span<const double> point, int order) const;

  /// Samples interior points on a small lattice and checks that the metric
  /// value part is symmetric positive definite, and that entries on periodic
  /// axes match at the interval endpoints (residual < 1e-10). Throws
  /// SingularMetric / DomainError on violation.
  void validate(int samples_per_axis = 3) const;

  std::vector<double> center() const;

 private:
  std::vector<std::string> coords_;
  std::vector<std::array<double, 2>> box_;
  std::vector<bool> periodic_;
  std::vector<Expression> metric_;  // dim*dim, symmetric
  std::string label_;
  ChartKind kind_ = ChartKind::Generic;
};

}  // namespace curvlab
