#include "curvlab/curvature.hpp"

#include <cmath>

namespace curvlab {

CurvatureState::CurvatureState(const Chart& chart, std::vector<double> point,
                               int metric_order)
    : chart_(chart), point_(std::move(point)), order_(metric_order) {
  if (static_cast<int>(point_.size()) != chart.dim())
    throw std::logic_error("CurvatureState: point dimension mismatch");
}

void CurvatureState::require_order(int min_order, const char* what) const {
  if (order_ < min_order)
    throw OrderExhausted(std::string(what) + " needs metric jets of order " +
                         std::to_string(min_order) + ", state has " +
                         std::to_string(order_));
}

const PointTensor& CurvatureState::metric() {
  if (!g_) g_ = chart_.metric_jets(point_, order_);
  return *g_;
}

const PointTensor& CurvatureState::metric_inv() {
  if (!ginv_) ginv_ = metric_inverse(metric());
  return *ginv_;
}

const PointTensor& CurvatureState::metric_partials() {
  require_order(1, "metric partials");
  if (!dg_) {
    const int n = dim();
    PointTensor out(JetLayout::get(n, order_ - 1),
                    {Variance::Co, Variance::Co, Variance::Co}, point_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out.at({i, j, k}) = metric().at({i, j}).derivative(k);
    dg_ = std::move(out);
  }
  return *dg_;
}

const PointTensor& CurvatureState::christoffel() {
  require_order(1, "Christoffel symbols");
  if (!gamma_) {
    const int n = dim();
    const PointTensor& dg = metric_partials();
    const PointTensor& gi = metric_inv();
    PointTensor out(dg.layout(), {Variance::Contra, Variance::Co, Variance::Co},
                    point_);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Jet acc = Jet::zero(dg.layout());
          for (int l = 0; l < n; ++l) {
            Jet term = dg.at({j, l, i});
            term += dg.at({i, l, j});
            term -= dg.at({i, j, l});
            acc.add_mul(gi.at({k, l}), term);
          }
          acc *= 0.5;
          if (j > i) out.at({k, j, i}) = acc;
          out.at({k, i, j}) = std::move(acc);
        }
    gamma_ = std::move(out);
  }
  return *gamma_;
}

const PointTensor& CurvatureState::riemann_mixed() {
  require_order(2, "Riemann tensor");
  if (!rm_mixed_) {
    const int n = dim();
    const PointTensor& ga = christoffel();
    PointTensor out(JetLayout::get(n, order_ - 2),
                    {Variance::Contra, Variance::Co, Variance::Co, Variance::Co},
                    point_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            // R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj
            //           + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj
            Jet& acc = out.at({i, j, k, l});
            acc += ga.at({i, l, j}).derivative(k);
            acc -= ga.at({i, k, j}).derivative(l);
            for (int m = 0; m < n; ++m) {
              acc.add_mul(ga.at({i, k, m}), ga.at({m, l, j}));
              acc.add_mul(ga.at({i, l, m}), ga.at({m, k, j}), -1.0);
            }
          }
    rm_mixed_ = std::move(out);
  }
  return *rm_mixed_;
}

const PointTensor& CurvatureState::riemann() {
  if (!rm_) rm_ = lower_slot(riemann_mixed(), 0, metric());
  return *rm_;
}

const PointTensor& CurvatureState::riemann_uu() {
  if (!rm_uu_) rm_uu_ = raise_slot(riemann_mixed(), 1, metric_inv());
  return *rm_uu_;
}

const PointTensor& CurvatureState::ricci() {
  if (!ric_) ric_ = contract(riemann_mixed(), 0, 2);
  return *ric_;
}

const Jet& CurvatureState::scalar_curvature() {
  if (!scalar_) {
    PointTensor s = contract(raise_slot(ricci(), 0, metric_inv()), 0, 1);
    scalar_ = s.flat_at(0);
  }
  return *scalar_;
}

const PointTensor& CurvatureState::schouten() {
  if (dim() < 3) throw DimensionError("Schouten tensor needs n >= 3");
  if (!schouten_) {
    const int n = dim();
    const double cR = 1.0 / (2.0 * (n - 1));
    const double cA = 1.0 / (n - 2);
    PointTensor out(ricci().layout(), {Variance::Co, Variance::Co}, point_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet& acc = out.at({i, j});
        acc += ricci().at({i, j});
        acc.add_mul(scalar_curvature(), metric().at({i, j}), -cR);
        acc *= cA;
      }
    schouten_ = std::move(out);
  }
  return *schouten_;
}

const PointTensor& CurvatureState::schouten_mixed() {
  if (!schouten_mixed_) schouten_mixed_ = raise_slot(schouten(), 0, metric_inv());
  return *schouten_mixed_;
}

const PointTensor& CurvatureState::schouten_uu() {
  if (!schouten_uu_) schouten_uu_ = raise_slot(schouten_mixed(), 1, metric_inv());
  return *schouten_uu_;
}

const PointTensor& CurvatureState::weyl() {
  if (dim() < 3) throw DimensionError("Weyl tensor needs n >= 3");
  if (!weyl_) {
    PointTensor w = kulkarni_nomizu(schouten(), metric());
    PointTensor out(w.layout(), w.variances(), point_);
    const std::size_t count = out.component_count();
    for (std::size_t f = 0; f < count; ++f) {
      out.flat_at(f) = riemann().flat_at(f);
      out.flat_at(f) -= w.flat_at(f);
    }
    weyl_ = std::move(out);
  }
  return *weyl_;
}

const PointTensor& CurvatureState::cotton() {
  require_order(3, "Cotton tensor");
  if (!cotton_) {
    PointTensor da = covariant_derivative(schouten(), christoffel());
    const int n = dim();
    PointTensor out(da.layout(), da.variances(), point_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Jet& acc = out.at({i, j, k});
          acc += da.at({i, j, k});
          acc -= da.at({i, k, j});
        }
    cotton_ = std::move(out);
  }
  return *cotton_;
}

const PointTensor& CurvatureState::weyl_divergence() {
  require_order(4, "Weyl divergence");
  if (!wdiv_) {
    PointTensor dw = covariant_derivative(weyl(), christoffel());
    wdiv_ = contract(raise_slot(dw, 4, metric_inv()), 0, 4);
  }
  return *wdiv_;
}

const PointTensor& CurvatureState::bach() {
  if (dim() <= 3) throw DimensionError("Bach tensor needs n >= 4");
  require_order(4, "Bach tensor");
  if (!bach_) {
    const int n = dim();
    // S_ikj = grad^l W_likj is weyl_divergence() read as (i,k,j)
    const PointTensor& S = weyl_divergence();
    PointTensor dS = covariant_derivative(S, christoffel());
    PointTensor b1 = contract(raise_slot(dS, 3, metric_inv()), 1, 3);
    // b1 slots: (i, j) = grad^k S_ikj
    PointTensor ric_uu =
        raise_slot(raise_slot(ricci(), 0, metric_inv()), 1, metric_inv());
    PointTensor out(b1.layout(), {Variance::Co, Variance::Co}, point_);
    const double c1 = 1.0 / (n - 3);
    const double c2 = 1.0 / (n - 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet& acc = out.at({i, j});
        acc.add_scaled(b1.at({i, j}), c1);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            acc.add_mul(ric_uu.at({k, l}), weyl().at({l, i, k, j}), c2);
      }
    bach_ = std::move(out);
  }
  return *bach_;
}

const Jet& CurvatureState::sigma(int k) {
  const int n = dim();
  if (k < 1 || k > n) throw DimensionError("sigma_k needs 1 <= k <= n");
  require_order(2, "sigma_k");
  auto it = sigma_.find(k);
  if (it != sigma_.end()) return it->second;

  // Newton identities on power traces of M = g^{-1} A
  const PointTensor& M = schouten_mixed();
  LayoutPtr layout = M.layout();
  std::vector<Jet> Mk(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Mk[i * n + j] = M.at({i, j});
  std::vector<Jet> base = Mk;

  std::vector<Jet> p;  // power traces p_1..p_k
  std::vector<Jet> e;  // elementary e_0..e_k
  e.push_back(Jet::constant(layout, 1.0));
  for (int j = 1; j <= n; ++j) {
    Jet tr = Jet::zero(layout);
    for (int i = 0; i < n; ++i) tr += Mk[i * n + i];
    p.push_back(tr);
    Jet ej = Jet::zero(layout);
    for (int i = 1; i <= j; ++i)
      ej.add_scaled(e[j - i] * p[i - 1], (i % 2) ? 1.0 : -1.0);
    ej *= 1.0 / j;
    e.push_back(std::move(ej));
    if (j < n) Mk = jet_mat_mul(Mk, base, n);
  }
  for (int j = 1; j <= n; ++j) sigma_.emplace(j, std::move(e[j]));
  return sigma_.at(k);
}

const PointTensor& CurvatureState::newton_mixed(int k) {
  const int n = dim();
  if (k < 0 || k > n - 1) throw DimensionError("Newton tensor needs 0 <= k <= n-1");
  require_order(2, "Newton tensor");
  auto it = newton_.find(k);
  if (it != newton_.end()) return it->second;

  const PointTensor& M = schouten_mixed();
  PointTensor out(M.layout(), {Variance::Co, Variance::Contra}, point_);
  double inv_fact = 1.0;
  for (int i = 2; i <= k; ++i) inv_fact /= i;
  for_each_kronecker_term(
      n, k + 1, [&](std::span<const int> L, std::span<const int> pi, int sign) {
        Jet& acc = out.at({L[0], L[pi[0]]});
        const double s = sign * inv_fact;
        if (k == 0) {
          acc += s;
        } else if (k == 1) {
          acc.add_scaled(M.at({L[1], L[pi[1]]}), s);
        } else {
          Jet prod = M.at({L[1], L[pi[1]]});
          for (int a = 2; a < k; ++a) prod = prod * M.at({L[a], L[pi[a]]});
          acc.add_mul(prod, M.at({L[k], L[pi[k]]}), s);
        }
      });
  return newton_.emplace(k, std::move(out)).first->second;
}

PointTensor CurvatureState::newton_lowered(int k) {
  return lower_slot(newton_mixed(k), 1, metric());
}

const Jet& CurvatureState::gauss_bonnet(int r) {
  const int n = dim();
  if (2 * r > n) throw DimensionError("Gauss-Bonnet curvature needs 2r <= n");
  if (r < 1) throw DimensionError("Gauss-Bonnet curvature needs r >= 1");
  require_order(2, "Gauss-Bonnet curvature");
  auto it = gb_.find(r);
  if (it != gb_.end()) return it->second;

  const PointTensor& R = riemann_uu();
  Jet acc = Jet::zero(R.layout());
  for_each_kronecker_term(
      n, 2 * r, [&](std::span<const int> L, std::span<const int> pi, int sign) {
        if (r == 1) {
          acc.add_scaled(R.at({L[0], L[1], L[pi[0]], L[pi[1]]}),
                         static_cast<double>(sign));
        } else {
          Jet prod = R.at({L[0], L[1], L[pi[0]], L[pi[1]]});
          for (int a = 1; a < r - 1; ++a)
            prod = prod * R.at({L[2 * a], L[2 * a + 1], L[pi[2 * a]], L[pi[2 * a + 1]]});
          acc.add_mul(prod,
                      R.at({L[2 * r - 2], L[2 * r - 1], L[pi[2 * r - 2]], L[pi[2 * r - 1]]}),
                      static_cast<double>(sign));
        }
      });
  return gb_.emplace(r, std::move(acc)).first->second;
}

const PointTensor& CurvatureState::p_tensor(int r) {
  const int n = dim();
  if (r < 0 || 2 * r > n) throw DimensionError("P_r needs 0 <= 2r <= n");
  require_order(2, "P_r tensor");
  auto it = p_.find(r);
  if (it != p_.end()) return it->second;

  const PointTensor& R = riemann_uu();
  PointTensor out(R.layout(), {Variance::Co, Variance::Contra}, point_);
  for_each_kronecker_term(
      n, 2 * r + 1, [&](std::span<const int> L, std::span<const int> pi, int sign) {
        Jet& acc = out.at({L[0], L[pi[0]]});
        if (r == 0) {
          acc += static_cast<double>(sign);
        } else if (r == 1) {
          acc.add_scaled(R.at({L[1], L[2], L[pi[1]], L[pi[2]]}),
                         static_cast<double>(sign));
        } else {
          Jet prod = R.at({L[1], L[2], L[pi[1]], L[pi[2]]});
          for (int a = 1; a < r - 1; ++a)
            prod = prod *
                   R.at({L[2 * a + 1], L[2 * a + 2], L[pi[2 * a + 1]], L[pi[2 * a + 2]]});
          acc.add_mul(
              prod, R.at({L[2 * r - 1], L[2 * r], L[pi[2 * r - 1]], L[pi[2 * r]]}),
              static_cast<double>(sign));
        }
      });
  return p_.emplace(r, std::move(out)).first->second;
}

const Jet& CurvatureState::v2k(int k) {
  const int n = dim();
  if (k < 1 || k > 3) throw DimensionError("v^(2k) implemented for k <= 3 only");
  auto it = v2k_.find(k);
  if (it != v2k_.end()) return it->second;

  Jet v;
  if (k == 1) {
    v = sigma(1) * (-0.5);
  } else if (k == 2) {
    v = sigma(2) * 0.25;
  } else {
    if (n <= 4)
      throw DimensionError("v^(6) needs n >= 5 (the 1/(3(n-4)) factor)");
    require_order(4, "v^(6)");
    const PointTensor& Auu = schouten_uu();
    const PointTensor& B = bach();
    Jet ab = Jet::zero(B.layout());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ab.add_mul(Auu.at({i, j}), B.at({i, j}));
    v = sigma(3).truncated(ab.order()) + ab * (1.0 / (3.0 * (n - 4)));
    v *= -0.125;
  }
  return v2k_.emplace(k, std::move(v)).first->second;
}

PointTensor CurvatureState::grad_of(const Jet& s) const {
  const int n = static_cast<int>(point_.size());
  PointTensor out(JetLayout::get(n, s.order() - 1), {Variance::Co}, point_);
  for (int i = 0; i < n; ++i) out.at({i}) = s.derivative(i);
  return out;
}

PointTensor CurvatureState::grad_scalar_curvature() {
  require_order(3, "grad R");
  return grad_of(scalar_curvature());
}

PointTensor CurvatureState::grad_sigma(int k) {
  require_order(3, "grad sigma_k");
  return grad_of(sigma(k));
}

PointTensor CurvatureState::grad_gauss_bonnet(int r) {
  require_order(3, "grad G_2r");
  return grad_of(gauss_bonnet(r));
}

PointTensor CurvatureState::grad_v6() {
  require_order(5, "grad v^(6)");
  return grad_of(v2k(3));
}

PointTensor CurvatureState::div_bach() {
  require_order(5, "div of Bach tensor");
  PointTensor bm = raise_slot(bach(), 1, metric_inv());
  return contract(covariant_derivative(bm, christoffel()), 1, 2);
}

PointTensor CurvatureState::div_newton2() {
  require_order(5, "div of T^(2)");
  return contract(covariant_derivative(newton_mixed(2), christoffel()), 1, 2);
}

PointTensor CurvatureState::div_p_tensor(int r) {
  require_order(5, "div of P_r");
  return contract(covariant_derivative(p_tensor(r), christoffel()), 1, 2);
}

PointTensor CurvatureState::schouten_dot_cotton() {
  require_order(3, "A : C contraction");
  const int n = dim();
  const PointTensor& Auu = schouten_uu();
  const PointTensor& C = cotton();
  PointTensor out(C.layout(), {Variance::Co}, point_);
  for (int i = 0; i < n; ++i) {
    Jet& acc = out.at({i});
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) acc.add_mul(Auu.at({p, q}), C.at({p, q, i}));
  }
  return out;
}

std::vector<double> sigma_values_faddeev(CurvatureState& state) {
  const int n = state.dim();
  const PointTensor& M = state.schouten_mixed();
  std::vector<double> A(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i * n + j] = M.at({i, j}).value();

  // M_1 = A, c_k = tr(M_k)/k, M_{k+1} = A (M_k - c_k I); the elementary
  // symmetric functions alternate: e_k = (-1)^{k-1} c_k
  std::vector<double> out(n + 1, 0.0);
  out[0] = 1.0;
  std::vector<double> Mk = A;
  for (int k = 1; k <= n; ++k) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += Mk[i * n + i];
    double ck = tr / k;
    out[k] = (k % 2 == 1) ? ck : -ck;
    if (k == n) break;
    std::vector<double> T = Mk;
    for (int i = 0; i < n; ++i) T[i * n + i] -= ck;
    std::vector<double> next(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += A[i * n + m] * T[m * n + j];
        next[i * n + j] = s;
      }
    Mk = std::move(next);
  }
  return out;
}

}  // namespace curvlab
