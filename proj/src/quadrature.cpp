#include "curvlab/quadrature.hpp"

#include <cmath>

#include "curvlab/parallel.hpp"

namespace curvlab {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double value_det(const PointTensor& g) {
  const int n = g.dim();
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i * n + j] = g.at({i, j}).value();
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(m[r * n + k]) > std::abs(m[p * n + k])) p = r;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
      det = -det;
    }
    if (m[k * n + k] == 0.0) return 0.0;
    det *= m[k * n + k];
    for (int r = k + 1; r < n; ++r) {
      double f = m[r * n + k] / m[k * n + k];
      for (int j = k; j < n; ++j) m[r * n + j] -= f * m[k * n + j];
    }
  }
  return det;
}

double sqrt_det_g(const Chart& chart, std::span<const double> p) {
  double det = value_det(chart.metric_jets(p, 0));
  if (det <= 0.0) throw SingularMetric("volume element: det g <= 0 at node");
  return std::sqrt(det);
}

struct AxisGrid {
  std::vector<double> x, w;
};

struct Grid {
  std::vector<AxisGrid> axes;
  std::size_t total = 1;

  void decode(std::size_t flat, std::span<double> point, double& weight) const {
    weight = 1.0;
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      const std::size_t m = axes[a].x.size();
      const std::size_t i = flat % m;
      flat /= m;
      point[a] = axes[a].x[i];
      weight *= axes[a].w[i];
    }
  }
};

int level_count(int base, double mult) {
  int m = static_cast<int>(std::llround(base * mult));
  return std::max(4, m);
}

Grid build_grid(const Chart& chart, const QuadratureSpec& spec, double mult) {
  Grid grid;
  const int n = chart.dim();
  grid.axes.resize(n);
  for (int a = 0; a < n; ++a) {
    const int m = level_count(spec.nodes[a], mult);
    const double lo = chart.box()[a][0];
    const double hi = chart.box()[a][1];
    if (spec.rules[a] == AxisRule::GaussLegendre) {
      gauss_legendre(m, lo, hi, grid.axes[a].x, grid.axes[a].w);
    } else {
      grid.axes[a].x.resize(m);
      grid.axes[a].w.assign(m, (hi - lo) / m);
      for (int i = 0; i < m; ++i) grid.axes[a].x[i] = lo + i * (hi - lo) / m;
    }
    grid.total *= static_cast<std::size_t>(m);
  }
  return grid;
}

/// Evaluates `node_value` on every node of the grid in parallel, then
/// reduces in flat-index order (bit-reproducible across thread counts).
/// node_value receives (point, weight) and returns the addend(s).
template <int N>
std::array<double, N> grid_sum(
    const Grid& grid, int threads, int dim,
    const std::function<void(std::span<const double>, double, std::array<double, N>&)>&
        node_value) {
  std::vector<std::array<double, N>> values(grid.total);
  parallel_for(grid.total, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> point(dim);
    for (std::size_t f = begin; f < end; ++f) {
      double weight = 1.0;
      grid.decode(f, point, weight);
      std::array<double, N>& out = values[f];
      out.fill(0.0);
      try {
        node_value(point, weight, out);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw NodeEvaluationError(point, e.what());
      }
      for (double v : out)
        if (!std::isfinite(v)) throw NonFiniteValue("non-finite value at node");
    }
  });
  std::array<KahanSum, N> acc;
  for (std::size_t f = 0; f < grid.total; ++f)
    for (int i = 0; i < N; ++i) acc[i].add(values[f][i]);
  std::array<double, N> out;
  for (int i = 0; i < N; ++i) out[i] = acc[i].sum;
  return out;
}

double unit_sphere_volume(int m) {
  // vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

std::vector<double> axisym_slice_point(const Chart& chart, double theta1) {
  std::vector<double> p(chart.dim(), kPi / 2.0);
  p[0] = theta1;
  p[chart.dim() - 1] = kPi;  // interior azimuth value; integrand is axisymmetric
  return p;
}

/// 1-D reduced integral over the first polar angle of a sphere_polar chart:
/// integral f dv = vol(S^{n-1}) * sum w * f(slice) * sqrt(det g)(slice),
/// where sqrt(det g) at the slice (t2..t_{n-1} = pi/2) collapses to the
/// 1-D density e^{n phi(t1)} sin^{n-1}(t1).
double axisym_integrate(const Chart& chart, const ScalarField& field, int m,
                        int threads) {
  if (chart.kind() != ChartKind::SpherePolar)
    throw Error("axisymmetric reduction requires a sphere_polar chart");
  const int n = chart.dim();
  std::vector<double> x, w;
  gauss_legendre(m, 0.0, kPi, x, w);
  std::vector<double> values(static_cast<std::size_t>(m));
  parallel_for(values.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<double> p = axisym_slice_point(chart, x[i]);
      values[i] = w[i] * field(p) * sqrt_det_g(chart, p);
    }
  });
  KahanSum acc;
  for (double v : values) acc.add(v);
  return unit_sphere_volume(n - 1) * acc.sum;
}

void check_ckv(const Chart& chart, const VectorFieldSpec& X) {
  const int n = chart.dim();
  const int per_axis = n >= 6 ? 2 : 3;
  std::vector<int> idx(n, 0);
  std::vector<double> p(n);
  double worst = 0.0;
  while (true) {
    for (int a = 0; a < n; ++a) {
      double t = (idx[a] + 1.0) / (per_axis + 1.0);
      p[a] = chart.box()[a][0] + t * (chart.box()[a][1] - chart.box()[a][0]);
    }
    worst = std::max(worst, ckv_relative_residual(chart, X, p));
    int a = n - 1;
    while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
    if (a < 0) break;
  }
  if (worst > 1e-8)
    throw NotConformalKilling("field '" + X.label +
                              "' fails the conformal Killing check (residual " +
                              std::to_string(worst) + ")");
}

double kw_integrand(const Chart& chart, const VectorFieldSpec& X,
                    const KwQuantity& q, std::span<const double> p) {
  CurvatureState s(chart, std::vector<double>(p.begin(), p.end()),
                   q.metric_order());
  PointTensor grad = q.kind == KwQuantity::Kind::Sigma ? s.grad_sigma(q.param)
                     : q.kind == KwQuantity::Kind::G2r
                         ? s.grad_gauss_bonnet(q.param)
                         : s.grad_v6();
  double acc = 0.0;
  for (int i = 0; i < chart.dim(); ++i)
    acc += X.components[i].eval_value(p) * grad.at({i}).value();
  return acc;
}

}  // namespace

void QuadratureSpec::validate(const Chart& chart) const {
  const int n = chart.dim();
  if (static_cast<int>(rules.size()) != n || static_cast<int>(nodes.size()) != n)
    throw Error("quadrature spec axis count does not match chart dimension");
  if (ladder.empty()) throw Error("quadrature ladder must be non-empty");
  for (int a = 0; a < n; ++a) {
    if (nodes[a] < 4) throw Error("quadrature needs at least 4 nodes per axis");
    if (rules[a] == AxisRule::TrapezoidPeriodic && !chart.periodic(a))
      throw Error("trapezoid_periodic requires a periodic axis");
  }
}

void gauss_legendre(int n, double lo, double hi, std::vector<double>& x,
                    std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n with the Chebyshev-like initial guess
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double xm = 0.5 * (hi + lo);
    const double xl = 0.5 * (hi - lo);
    x[i] = xm - xl * z;
    x[n - 1 - i] = xm + xl * z;
    w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

IntegralResult integrate(const Chart& chart, const ScalarField& field,
                         const QuadratureSpec& spec, int threads) {
  spec.validate(chart);
  IntegralResult out;
  for (double mult : spec.ladder) {
    double v;
    if (spec.axisymmetric_reduction) {
      v = axisym_integrate(chart, field, level_count(spec.nodes[0], mult), threads);
    } else {
      Grid grid = build_grid(chart, spec, mult);
      auto sums = grid_sum<1>(
          grid, threads, chart.dim(),
          [&](std::span<const double> p, double w, std::array<double, 1>& o) {
            o[0] = w * field(p) * sqrt_det_g(chart, p);
          });
      v = sums[0];
    }
    out.levels.push_back(v);
  }
  out.value = out.levels.back();
  return out;
}

KwResult kw_integral(const Chart& chart, const VectorFieldSpec& X,
                     const KwQuantity& quantity, const QuadratureSpec& spec,
                     int threads) {
  spec.validate(chart);
  check_ckv(chart, X);
  KwResult out;
  for (double mult : spec.ladder) {
    double I, N, V;
    if (spec.axisymmetric_reduction) {
      const int m = level_count(spec.nodes[0], mult);
      std::vector<double> x, w;
      gauss_legendre(m, 0.0, kPi, x, w);
      std::vector<std::array<double, 3>> values(static_cast<std::size_t>(m));
      parallel_for(values.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          std::vector<double> p = axisym_slice_point(chart, x[i]);
          double f = kw_integrand(chart, X, quantity, p);
          double dv = w[i] * sqrt_det_g(chart, p);
          values[i] = {f * dv, std::abs(f) * dv, dv};
        }
      });
      KahanSum aI, aN, aV;
      for (auto& v : values) {
        aI.add(v[0]);
        aN.add(v[1]);
        aV.add(v[2]);
      }
      const double omega = unit_sphere_volume(chart.dim() - 1);
      I = omega * aI.sum;
      N = omega * aN.sum;
      V = omega * aV.sum;
    } else {
      Grid grid = build_grid(chart, spec, mult);
      auto sums = grid_sum<3>(
          grid, threads, chart.dim(),
          [&](std::span<const double> p, double w, std::array<double, 3>& o) {
            double f = kw_integrand(chart, X, quantity, p);
            double dv = w * sqrt_det_g(chart, p);
            o = {f * dv, std::abs(f) * dv, dv};
          });
      I = sums[0];
      N = sums[1];
      V = sums[2];
    }
    out.integral.push_back(I);
    out.normalizer.push_back(N);
    out.degenerate = N <= 1e-12 * std::max(1.0, V);
    out.ratio.push_back(out.degenerate ? 0.0 : std::abs(I) / N);
  }
  out.final_normalizer = out.normalizer.back();
  out.final_ratio = out.ratio.back();
  return out;
}

InvarianceResult conformal_invariance_functional(const Chart& chart,
                                                 const Expression& eta,
                                                 const VectorFieldSpec& X,
                                                 const QuadratureSpec& spec,
                                                 int threads) {
  if (chart.dim() != 6)
    throw DimensionError("conformal invariance functional is the n = 2k case, n = 6");
  check_ckv(chart, X);
  Chart rescaled = rescale(chart, eta, 1.0);
  auto eval = [&](const Chart& c) {
    return integrate(
        c,
        [&](std::span<const double> p) {
          CurvatureState s(c, std::vector<double>(p.begin(), p.end()), 4);
          return divergence(s, X).value() * s.v2k(3).value();
        },
        spec, threads);
  };
  IntegralResult base = eval(chart);
  IntegralResult resc = eval(rescaled);
  InvarianceResult out;
  out.base_levels = base.levels;
  out.rescaled_levels = resc.levels;
  out.base = base.value;
  out.rescaled = resc.value;
  out.relative_difference = std::abs(out.base - out.rescaled) /
                            (std::abs(out.base) + std::abs(out.rescaled) + 1e-300);
  return out;
}

}  // namespace curvlab
