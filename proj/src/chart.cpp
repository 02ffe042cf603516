#include "curvlab/chart.hpp"

#include <cmath>

namespace curvlab {

Chart::Chart(std::vector<std::string> coords, std::vector<std::array<double, 2>> box,
             std::vector<bool> periodic, std::vector<Expression> metric_entries,
             std::string label, ChartKind kind)
    : coords_(std::move(coords)),
      box_(std::move(box)),
      periodic_(std::move(periodic)),
      metric_(std::move(metric_entries)),
      label_(std::move(label)),
      kind_(kind) {
  const std::size_t n = coords_.size();
  if (box_.size() != n || periodic_.size() != n || metric_.size() != n * n)
    throw std::logic_error("Chart: inconsistent field sizes");
}

PointTensor Chart::metric_jets(std::span<const double> point, int order) const {
  const int n = dim();
  PointTensor g(JetLayout::get(n, order), {Variance::Co, Variance::Co},
                std::vector<double>(point.begin(), point.end()));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet v = metric_entry(i, j).eval_jet(point, order);
      if (j > i) g.at({j, i}) = v;
      g.at({i, j}) = std::move(v);
    }
  return g;
}

namespace {

bool value_spd(const PointTensor& g) {
  // Cholesky on the value part
  const int n = g.dim();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = g.at({i, j}).value();
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < k; ++j) a[k * n + k] -= a[k * n + j] * a[k * n + j];
    if (a[k * n + k] <= 0.0) return false;
    a[k * n + k] = std::sqrt(a[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      for (int j = 0; j < k; ++j) a[i * n + k] -= a[i * n + j] * a[k * n + j];
      a[i * n + k] /= a[k * n + k];
    }
  }
  return true;
}

}  // namespace

void Chart::validate(int samples_per_axis) const {
  const int n = dim();
  std::vector<double> p(n);
  std::vector<int> idx(n, 0);
  // interior lattice
  while (true) {
    for (int a = 0; a < n; ++a) {
      double t = (idx[a] + 1.0) / (samples_per_axis + 1.0);
      p[a] = box_[a][0] + t * (box_[a][1] - box_[a][0]);
    }
    if (!value_spd(metric_jets(p, 0)))
      throw SingularMetric("chart metric is not positive definite at a sample point");
    int a = n - 1;
    while (a >= 0 && ++idx[a] == samples_per_axis) idx[a--] = 0;
    if (a < 0) break;
  }

  for (int axis = 0; axis < n; ++axis) {
    if (!periodic_[axis]) continue;
    std::vector<int> jdx(n, 0);
    while (true) {
      for (int a = 0; a < n; ++a) {
        double t = (jdx[a] + 1.0) / (samples_per_axis + 1.0);
        p[a] = box_[a][0] + t * (box_[a][1] - box_[a][0]);
      }
      std::vector<double> plo = p, phi = p;
      plo[axis] = box_[axis][0];
      phi[axis] = box_[axis][1];
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double lo = metric_entry(i, j).eval_value(plo);
          double hi = metric_entry(i, j).eval_value(phi);
          if (std::abs(lo - hi) > 1e-10 * (1.0 + std::abs(lo)))
            throw DomainError("chart metric entry not periodic on axis " +
                              coords_[axis]);
        }
      int a = n - 1;
      while (a >= 0 && ++jdx[a] == samples_per_axis) jdx[a--] = 0;
      if (a < 0) break;
    }
  }
}

std::vector<double> Chart::center() const {
  std::vector<double> c(dim());
  for (int a = 0; a < dim(); ++a) c[a] = 0.5 * (box_[a][0] + box_[a][1]);
  return c;
}

}  // namespace curvlab
