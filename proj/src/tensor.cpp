#include "curvlab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

namespace {

std::size_t pow_int(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

bool advance_odometer(std::span<int> idx, int n) {
  for (int p = static_cast<int>(idx.size()) - 1; p >= 0; --p) {
    if (++idx[p] < n) return true;
    idx[p] = 0;
  }
  return false;
}

}  // namespace

PointTensor::PointTensor(LayoutPtr layout, std::vector<Variance> variance,
                         std::vector<double> point)
    : layout_(std::move(layout)),
      variance_(std::move(variance)),
      point_(std::move(point)) {
  comps_.assign(pow_int(layout_->dim(), static_cast<int>(variance_.size())),
                Jet::zero(layout_));
}

PointTensor& PointTensor::operator+=(const PointTensor& o) {
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

PointTensor& PointTensor::operator-=(const PointTensor& o) {
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

PointTensor& PointTensor::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

double PointTensor::max_abs_value() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, std::abs(c.value()));
  return m;
}

// ---------------------------------------------------------------------------

int gen_kronecker(std::span<const int> upper, std::span<const int> lower) {
  const int m = static_cast<int>(upper.size());
  if (m == 0) return 1;
  // determinant of the 0/1 matrix delta(upper_a, lower_b), fraction-free
  std::int64_t mat[8][8];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mat[i][j] = (upper[i] == lower[j]) ? 1 : 0;
  std::int64_t prev = 1;
  int sign = 1;
  for (int k = 0; k < m - 1; ++k) {
    if (mat[k][k] == 0) {
      int p = -1;
      for (int r = k + 1; r < m; ++r)
        if (mat[r][k] != 0) {
          p = r;
          break;
        }
      if (p < 0) return 0;  // zero pivot column
      for (int j = 0; j < m; ++j) std::swap(mat[k][j], mat[p][j]);
      sign = -sign;
    }
    for (int i = k + 1; i < m; ++i) {
      for (int j = k + 1; j < m; ++j)
        mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) / prev;
      mat[i][k] = 0;
    }
    prev = mat[k][k];
  }
  return static_cast<int>(sign * mat[m - 1][m - 1]);
}

namespace {

void distinct_tuples_rec(int n, int m, std::vector<int>& tuple, std::vector<bool>& used,
                         const std::function<void(std::span<const int>)>& cb) {
  if (static_cast<int>(tuple.size()) == m) {
    cb(tuple);
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (used[v]) continue;
    used[v] = true;
    tuple.push_back(v);
    distinct_tuples_rec(n, m, tuple, used, cb);
    tuple.pop_back();
    used[v] = false;
  }
}

// Heap's algorithm with incremental sign
void permutations_rec(std::vector<int>& pos, int k, int& sign,
                      const std::function<void(std::span<const int>, int)>& cb) {
  if (k == 1) {
    cb(pos, sign);
    return;
  }
  for (int i = 0; i < k - 1; ++i) {
    permutations_rec(pos, k - 1, sign, cb);
    std::swap(pos[(k % 2 == 0) ? i : 0], pos[k - 1]);
    sign = -sign;
  }
  permutations_rec(pos, k - 1, sign, cb);
}

}  // namespace

void for_each_kronecker_term(
    int n, int m,
    const std::function<void(std::span<const int>, std::span<const int>, int)>& cb) {
  if (m > n) return;  // no tuple of m distinct indices exists
  std::vector<int> tuple;
  std::vector<bool> used(n, false);
  tuple.reserve(m);
  distinct_tuples_rec(n, m, tuple, used, [&](std::span<const int> t) {
    std::vector<int> pos(m);
    for (int i = 0; i < m; ++i) pos[i] = i;
    int sign = 1;
    permutations_rec(pos, m, sign,
                     [&](std::span<const int> p, int s) { cb(t, p, s); });
  });
}

// ---------------------------------------------------------------------------

PointTensor contract(const PointTensor& t, int slot_a, int slot_b) {
  if (t.variance(slot_a) == t.variance(slot_b))
    throw VarianceError("contract: slots must have opposite variance");
  const int n = t.dim();
  const int r = t.rank();
  std::vector<Variance> var;
  for (int s = 0; s < r; ++s)
    if (s != slot_a && s != slot_b) var.push_back(t.variance(s));
  PointTensor out(t.layout(), var, t.point());

  std::vector<int> free_idx(r - 2, 0);
  std::vector<int> full(r);
  do {
    Jet& acc = out.at(free_idx);
    int fpos = 0;
    for (int s = 0; s < r; ++s)
      if (s != slot_a && s != slot_b) full[s] = free_idx[fpos++];
    for (int k = 0; k < n; ++k) {
      full[slot_a] = k;
      full[slot_b] = k;
      acc += t.at(full);
    }
  } while (!free_idx.empty() && advance_odometer(free_idx, n));
  return out;
}

namespace {

PointTensor metric_slot_op(const PointTensor& t, int slot, const PointTensor& m,
                           Variance required, Variance result_var) {
  if (t.variance(slot) != required)
    throw VarianceError("raise/lower: slot already has target variance");
  const int n = t.dim();
  const int r = t.rank();
  std::vector<Variance> var = t.variances();
  var[slot] = result_var;
  LayoutPtr layout =
      t.order() <= m.order() ? t.layout() : m.layout();
  PointTensor out(layout, var, t.point());
  std::vector<int> idx(r, 0);
  std::vector<int> src(r, 0);
  do {
    Jet& acc = out.at(idx);
    src = idx;
    for (int k = 0; k < n; ++k) {
      src[slot] = k;
      acc.add_mul(m.at({idx[slot], k}), t.at(src));
    }
  } while (advance_odometer(idx, n));
  return out;
}

}  // namespace

PointTensor raise_slot(const PointTensor& t, int slot, const PointTensor& g_inv) {
  return metric_slot_op(t, slot, g_inv, Variance::Co, Variance::Contra);
}

PointTensor lower_slot(const PointTensor& t, int slot, const PointTensor& g) {
  return metric_slot_op(t, slot, g, Variance::Contra, Variance::Co);
}

PointTensor kulkarni_nomizu(const PointTensor& a, const PointTensor& b) {
  const int n = a.dim();
  LayoutPtr layout = a.order() <= b.order() ? a.layout() : b.layout();
  PointTensor out(layout,
                  {Variance::Co, Variance::Co, Variance::Co, Variance::Co},
                  a.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet& c = out.at({i, j, k, l});
          c.add_mul(a.at({i, k}), b.at({j, l}));
          c.add_mul(a.at({j, l}), b.at({i, k}));
          c.add_mul(a.at({i, l}), b.at({j, k}), -1.0);
          c.add_mul(a.at({j, k}), b.at({i, l}), -1.0);
        }
  return out;
}

PointTensor covariant_derivative(const PointTensor& t, const PointTensor& gamma) {
  if (t.order() == 0)
    throw OrderExhausted("covariant_derivative: tensor jets have order 0");
  const int n = t.dim();
  const int r = t.rank();
  std::vector<Variance> var = t.variances();
  var.push_back(Variance::Co);
  PointTensor out(JetLayout::get(n, t.order() - 1), var, t.point());

  std::vector<int> idx(r + 1, 0);
  std::vector<int> src(r, 0);
  do {
    Jet& acc = out.at(idx);
    const int k = idx[r];
    std::copy(idx.begin(), idx.begin() + r, src.begin());
    acc += t.at(src).derivative(k);
    for (int s = 0; s < r; ++s) {
      const int is = idx[s];
      for (int m = 0; m < n; ++m) {
        src[s] = m;
        if (t.variance(s) == Variance::Contra)
          acc.add_mul(gamma.at({is, k, m}), t.at(src));
        else
          acc.add_mul(gamma.at({m, k, is}), t.at(src), -1.0);
      }
      src[s] = is;
    }
  } while (advance_odometer(idx, n));
  return out;
}

// ---------------------------------------------------------------------------
// jet matrices

std::vector<Jet> jet_mat_mul(const std::vector<Jet>& A, const std::vector<Jet>& B,
                             int n) {
  std::vector<Jet> C(static_cast<std::size_t>(n) * n,
                     Jet::zero(A[0].layout()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& c = C[i * n + j];
      for (int k = 0; k < n; ++k) c.add_mul(A[i * n + k], B[k * n + j]);
    }
  return C;
}

Jet jet_mat_det(std::vector<Jet> M, int n) {
  Jet det = Jet::constant(M[0].layout(), 1.0);
  double sign = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(M[k * n + k].value());
    for (int r = k + 1; r < n; ++r) {
      double v = std::abs(M[r * n + k].value());
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best == 0.0) throw SingularMetric("jet_mat_det: zero pivot column");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(M[k * n + j], M[p * n + j]);
      sign = -sign;
    }
    det = det * M[k * n + k];
    Jet inv_piv = jet_inverse(M[k * n + k]);
    for (int r = k + 1; r < n; ++r) {
      Jet f = M[r * n + k] * inv_piv;
      for (int j = k; j < n; ++j) {
        M[r * n + j].add_mul(f, M[k * n + j], -1.0);
      }
    }
  }
  det *= sign;
  return det;
}

std::vector<Jet> jet_mat_inverse(std::vector<Jet> M, int n) {
  std::vector<Jet> I(static_cast<std::size_t>(n) * n,
                     Jet::zero(M[0].layout()));
  for (int i = 0; i < n; ++i) I[i * n + i] += 1.0;

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(M[k * n + k].value());
    for (int r = k + 1; r < n; ++r) {
      double v = std::abs(M[r * n + k].value());
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best == 0.0) throw SingularMetric("jet_mat_inverse: zero pivot");
    if (p != k) {
      for (int j = 0; j < n; ++j) {
        std::swap(M[k * n + j], M[p * n + j]);
        std::swap(I[k * n + j], I[p * n + j]);
      }
    }
    Jet inv_piv = jet_inverse(M[k * n + k]);
    for (int j = 0; j < n; ++j) {
      M[k * n + j] = M[k * n + j] * inv_piv;
      I[k * n + j] = I[k * n + j] * inv_piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k) continue;
      Jet f = M[r * n + k];
      if (f.value() == 0.0) {
        bool zero = true;
        for (int q = 0; q < f.size(); ++q)
          if (f[q] != 0.0) {
            zero = false;
            break;
          }
        if (zero) continue;
      }
      for (int j = 0; j < n; ++j) {
        M[r * n + j].add_mul(f, M[k * n + j], -1.0);
        I[r * n + j].add_mul(f, I[k * n + j], -1.0);
      }
    }
  }
  return I;
}

PointTensor metric_inverse(const PointTensor& g) {
  const int n = g.dim();
  // singularity guard on the value part
  std::vector<double> val(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) val[i * n + j] = g.at({i, j}).value();
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += val[i * n + j] * val[i * n + j];
    scale *= std::sqrt(row);
  }
  // LU determinant of the value matrix
  double det = 1.0;
  {
    std::vector<double> m = val;
    for (int k = 0; k < n; ++k) {
      int p = k;
      for (int r = k + 1; r < n; ++r)
        if (std::abs(m[r * n + k]) > std::abs(m[p * n + k])) p = r;
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
        det = -det;
      }
      if (m[k * n + k] == 0.0) {
        det = 0.0;
        break;
      }
      det *= m[k * n + k];
      for (int r = k + 1; r < n; ++r) {
        double f = m[r * n + k] / m[k * n + k];
        for (int j = k; j < n; ++j) m[r * n + j] -= f * m[k * n + j];
      }
    }
  }
  if (std::abs(det) <= 1e-13 * scale)
    throw SingularMetric("metric value part is numerically singular");

  std::vector<Jet> M(static_cast<std::size_t>(n) * n, Jet::zero(g.layout()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i * n + j] = g.at({i, j});
  std::vector<Jet> inv = jet_mat_inverse(std::move(M), n);

  PointTensor out(g.layout(), {Variance::Contra, Variance::Contra}, g.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at({i, j}) = std::move(inv[i * n + j]);
  return out;
}

}  // namespace curvlab
