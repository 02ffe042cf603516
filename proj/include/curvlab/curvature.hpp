#pragma once

#include <map>
#include <optional>
#include <vector>

#include "curvlab/chart.hpp"

namespace curvlab {

/// Memoized curvature stack of one chart at one point, at a fixed metric
/// jet order. Each quantity declares the minimal metric-derivative order it
/// is served at; requesting it from a state constructed with less raises
/// OrderExhausted. Confine one state to one evaluation task; distinct
/// points evaluate concurrently without shared data.
///
/// Sign convention: fixed so the unit round sphere has
/// R_ijkl = g_ik g_jl - g_il g_jk and R = n(n-1).
class CurvatureState {
 public:
  CurvatureState(const Chart& chart, std::vector<double> point, int metric_order);

  int dim() const { return chart_.dim(); }
  int metric_order() const { return order_; }
  const std::vector<double>& point() const { return point_; }
  const Chart& chart() const { return chart_; }

  const PointTensor& metric();          // g_ij, jets at the metric order
  const PointTensor& metric_inv();      // g^ij
  const PointTensor& metric_partials(); // d_k g_ij (slot order i,j,k)
  const PointTensor& christoffel();     // Gamma^k_ij, slots (k,i,j); order >= 1
  const PointTensor& riemann_mixed();   // R^i_jkl; order >= 2
  const PointTensor& riemann();         // R_ijkl
  const PointTensor& riemann_uu();      // R^ij_kl (first two slots raised)
  const PointTensor& ricci();           // Ric_ij
  const Jet& scalar_curvature();        // R
  const PointTensor& schouten();        // A_ij; n >= 3
  const PointTensor& schouten_mixed();  // A^i_j
  const PointTensor& schouten_uu();     // A^ij
  const PointTensor& weyl();            // W_ijkl; n >= 3
  const PointTensor& cotton();          // C_ijk = A_ij,k - A_ik,j; order >= 3
  const PointTensor& weyl_divergence(); // grad^l W_lijk, slots (i,j,k); order >= 4
  const PointTensor& bach();            // B_ij; n >= 4, order >= 4

  /// Elementary symmetric function of g^{-1} A as a jet (Newton identities
  /// over power traces; the value-part Faddeev-LeVerrier route is
  /// sigma_values_faddeev below).
  const Jet& sigma(int k);              // 1 <= k <= n; order >= 2
  const PointTensor& newton_mixed(int k);   // T^(k) as (1,1); order >= 2
  PointTensor newton_lowered(int k);
  const Jet& gauss_bonnet(int r);       // G_2r; 2r <= n; order >= 2
  const PointTensor& p_tensor(int r);   // (P_r)_i^j, slots (i co, j contra)
  const Jet& v2k(int k);                // k in {1,2,3}; k=3 needs n >= 5, order >= 4

  // gradients (coordinate partials of scalars, read off the scalar's jet)
  PointTensor grad_scalar_curvature();  // order >= 3
  PointTensor grad_sigma(int k);        // order >= 3
  PointTensor grad_gauss_bonnet(int r); // order >= 3
  PointTensor grad_v6();                // order >= 5

  // covariant divergences (declared at order 5 per the verification plan)
  PointTensor div_bach();               // order >= 5
  PointTensor div_newton2();            // order >= 5
  PointTensor div_p_tensor(int r);      // order >= 5

  /// sum_{p,q} A^{pq} C_{pq i} as a covariant vector; order >= 3
  PointTensor schouten_dot_cotton();

 private:
  void require_order(int min_order, const char* what) const;
  PointTensor grad_of(const Jet& s) const;

  Chart chart_;  // by value: states outlive any temporary they came from
  std::vector<double> point_;
  int order_;

  std::optional<PointTensor> g_, ginv_, dg_, gamma_, rm_mixed_, rm_, rm_uu_,
      ric_, schouten_, schouten_mixed_, schouten_uu_, weyl_, cotton_, wdiv_,
      bach_;
  std::optional<Jet> scalar_;
  std::map<int, Jet> sigma_, gb_, v2k_;
  std::map<int, PointTensor> newton_, p_;
};

/// Value-part sigma_k for all k = 0..n via the Faddeev-LeVerrier recursion
/// on the characteristic polynomial of g^{-1} A. Independent route used to
/// cross-check the jet path.
std::vector<double> sigma_values_faddeev(CurvatureState& state);

}  // namespace curvlab
