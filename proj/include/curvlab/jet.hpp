#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "curvlab/errors.hpp"
#include "curvlab/kernels.hpp"

namespace curvlab {

/// Shared enumeration data for truncated multivariate Taylor expansions in
/// `dim` variables up to total degree `order`.
///
/// Multi-indices are enumerated in graded lexicographic order: ascending
/// total degree, and within a degree block lexicographically by exponent
/// tuple with the first variable weighted highest ((2,0) before (1,1)
/// before (0,2)). The enumeration of order K-1 is a prefix of order K,
/// which lets jets of different orders share coefficient indices.
/// The enumeration is fixed and is part of the serialization contract.
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()) / dim_; }

  std::span<const std::uint8_t> exponents(int idx) const {
    return {exps_.data() + static_cast<std::size_t>(idx) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  int degree(int idx) const { return degree_[idx]; }
  int index_of(std::span<const int> alpha) const;  // -1 when |alpha| > order

  const kernels::ConvTable& conv_table() const { return conv_; }

  // Derivative d/dx_v maps the order-(K-1) prefix enumeration to source
  // indices: out[t] = c[deriv_index(v)[t]] * deriv_factor(v)[t].
  std::span<const std::int32_t> deriv_index(int v) const;
  std::span<const double> deriv_factor(int v) const;

 private:
  JetLayout(int dim, int order);

  int dim_;
  int order_;
  std::vector<std::uint8_t> exps_;   // size * dim exponents
  std::vector<int> degree_;
  std::vector<std::int64_t> keys_;   // packed exponents, sorted with perm_
  std::vector<std::int32_t> perm_;
  kernels::ConvTable conv_;
  std::vector<std::vector<std::int32_t>> didx_;
  std::vector<std::vector<double>> dfac_;
};

using LayoutPtr = std::shared_ptr<const JetLayout>;

/// Truncated multivariate Taylor expansion of a scalar at a point.
/// Coefficient for multi-index a stores d^a f / a! (Taylor-normalized).
/// Immutable by convention: all operations return new values.
class Jet {
 public:
  Jet() = default;
  static Jet zero(LayoutPtr layout);
  static Jet constant(LayoutPtr layout, double v);
  static Jet variable(LayoutPtr layout, int var, double value_at_point);

  int dim() const { return layout_->dim(); }
  int order() const { return layout_->order(); }
  int size() const { return static_cast<int>(c_.size()); }
  const LayoutPtr& layout() const { return layout_; }

  double value() const { return c_[0]; }
  double operator[](int i) const { return c_[i]; }
  double coeff(std::span<const int> alpha) const;
  std::span<const double> coeffs() const { return c_; }
  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }

  /// Partial derivative d/dx_v as a jet of order K-1.
  Jet derivative(int v) const;

  /// Copy truncated to a (lower or equal) order.
  Jet truncated(int new_order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);

  /// this += sign * a*b, truncated at this jet's order. Operand orders
  /// must be >= this order (prefix coefficients are read).
  void add_mul(const Jet& a, const Jet& b, double sign = 1.0);
  /// this += s * o (elementwise over the shared prefix).
  void add_scaled(const Jet& o, double s);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(const Jet& a, double s);
  friend Jet operator+(double s, const Jet& a);
  friend Jet operator-(const Jet& a, double s);
  friend Jet operator-(double s, const Jet& a);
  friend Jet operator*(const Jet& a, double s);
  friend Jet operator*(double s, const Jet& a);
  friend Jet operator/(const Jet& a, double s);
  friend Jet operator/(double s, const Jet& a);

 private:
  LayoutPtr layout_;
  std::vector<double> c_;
};

// Univariate compositions (exact truncated Taylor expansions).
Jet jet_sin(const Jet& u);
Jet jet_cos(const Jet& u);
Jet jet_tan(const Jet& u);
Jet jet_exp(const Jet& u);
Jet jet_log(const Jet& u);    // DomainError when value <= 0
Jet jet_sqrt(const Jet& u);   // DomainError when value <= 0
Jet jet_inverse(const Jet& u);  // DomainError when value == 0
Jet jet_pow_int(const Jet& u, long long m);
Jet jet_pow_real(const Jet& u, double p);  // DomainError when value <= 0

/// Composition with an arbitrary univariate expansion
/// f(u) = sum_k coeffs[k] (u - u.value())^k, truncated at u's order.
Jet jet_compose(const Jet& u, std::span<const double> coeffs);

}  // namespace curvlab
