#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "curvlab/jet.hpp"

namespace curvlab {

enum class Variance : std::uint8_t { Co, Contra };

/// Dense multi-index array of jets at a point, with an explicit
/// covariant/contravariant signature per slot. Components are stored
/// row-major with slot 0 heaviest. Immutable by convention once filled.
class PointTensor {
 public:
  PointTensor() = default;
  PointTensor(LayoutPtr layout, std::vector<Variance> variance,
              std::vector<double> point);

  int dim() const { return layout_->dim(); }
  int rank() const { return static_cast<int>(variance_.size()); }
  int order() const { return layout_->order(); }
  std::size_t component_count() const { return comps_.size(); }
  const LayoutPtr& layout() const { return layout_; }
  const std::vector<double>& point() const { return point_; }
  Variance variance(int slot) const { return variance_[slot]; }
  const std::vector<Variance>& variances() const { return variance_; }

  Jet& at(std::initializer_list<int> idx) { return comps_[flat(idx)]; }
  const Jet& at(std::initializer_list<int> idx) const { return comps_[flat(idx)]; }
  Jet& at(std::span<const int> idx) { return comps_[flat(idx)]; }
  const Jet& at(std::span<const int> idx) const { return comps_[flat(idx)]; }
  Jet& flat_at(std::size_t i) { return comps_[i]; }
  const Jet& flat_at(std::size_t i) const { return comps_[i]; }

  std::size_t flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * dim() + static_cast<std::size_t>(i);
    return f;
  }
  std::size_t flat(std::initializer_list<int> idx) const {
    return flat(std::span<const int>(idx.begin(), idx.size()));
  }

  PointTensor& operator+=(const PointTensor& o);
  PointTensor& operator-=(const PointTensor& o);
  PointTensor& operator*=(double s);

  double max_abs_value() const;

 private:
  LayoutPtr layout_;
  std::vector<Variance> variance_;
  std::vector<Jet> comps_;
  std::vector<double> point_;
};

/// Generalized Kronecker symbol: det of the m x m matrix with entries
/// delta(upper_a, lower_b). Total function; exact integer result.
int gen_kronecker(std::span<const int> upper, std::span<const int> lower);

/// Enumerate ordered tuples of m distinct indices in [0, n) together with
/// all permutations of the tuple and the permutation sign; this visits
/// exactly the nonzero entries of the generalized Kronecker symbol.
/// callback(lower_tuple, permuted_positions, sign).
void for_each_kronecker_term(
    int n, int m,
    const std::function<void(std::span<const int>, std::span<const int>, int)>& cb);

PointTensor contract(const PointTensor& t, int slot_a, int slot_b);
PointTensor raise_slot(const PointTensor& t, int slot, const PointTensor& g_inv);
PointTensor lower_slot(const PointTensor& t, int slot, const PointTensor& g);

/// Kulkarni-Nomizu product of two symmetric covariant 2-tensors:
/// (a (*) b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
PointTensor kulkarni_nomizu(const PointTensor& a, const PointTensor& b);

/// Covariant derivative with the new covariant slot appended last.
/// Input jets must have order >= 1; result jets have order K-1.
PointTensor covariant_derivative(const PointTensor& t, const PointTensor& gamma);

/// Jet-ring inverse of a symmetric positive definite metric. Throws
/// SingularMetric when the value-part determinant is below 1e-13 times the
/// Hadamard bound of the value matrix.
PointTensor metric_inverse(const PointTensor& g);

// dense n x n jet matrices, row-major
std::vector<Jet> jet_mat_mul(const std::vector<Jet>& A, const std::vector<Jet>& B, int n);
Jet jet_mat_det(std::vector<Jet> M, int n);
std::vector<Jet> jet_mat_inverse(std::vector<Jet> M, int n);

}  // namespace curvlab
