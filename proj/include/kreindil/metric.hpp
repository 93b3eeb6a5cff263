#pragma once

#include "kreindil/numerics.hpp"
#include "kreindil/operator_core.hpp"

namespace kreindil {

/// The active inner product ⟨x, y⟩ = y*·M·x. An exactly-identity M is
/// detected and every operation then short-circuits to plain arithmetic.
class MetricContext {
 public:
  static MetricContext plain(Index dim);
  /// Validates that M is Hermitian positive definite.
  static MetricContext from_matrix(const CMatrix& m);
  /// The metric of the operator if it has one, otherwise the plain product.
  static MetricContext of(const OperatorSpec& spec);

  Index dim() const { return matrix_.rows(); }
  bool is_identity() const { return identity_; }

  const CMatrix& matrix() const { return matrix_; }
  const CMatrix& inverse() const { return inverse_; }
  const CMatrix& sqrt() const { return sqrt_; }
  const CMatrix& inv_sqrt() const { return inv_sqrt_; }

  /// X♯ = M⁻¹X*M, the adjoint with respect to this product.
  CMatrix adjoint(const CMatrix& x) const;
  Complex inner(const CVector& x, const CVector& y) const;
  double norm_sq(const CVector& x) const;
  /// ⟨Xx, x⟩ for the quadratic form of X.
  double form(const CMatrix& x, const CVector& v) const;

  /// M^{1/2} X M^{-1/2}: the matrix of X in an orthonormal basis.
  CMatrix to_orthonormal(const CMatrix& x) const;
  CMatrix from_orthonormal(const CMatrix& x) const;

  /// Operator norm induced by this product.
  double op_norm(const CMatrix& x) const;

  /// d, D with d²‖h‖² ≤ h*h ≤ D²‖h‖² (‖·‖ the norm of this product).
  double lower_equivalence() const;
  double upper_equivalence() const;

 private:
  CMatrix matrix_;
  CMatrix inverse_;
  CMatrix sqrt_;
  CMatrix inv_sqrt_;
  double min_eig_ = 1.0;
  double max_eig_ = 1.0;
  bool identity_ = true;
};

}  // namespace kreindil
