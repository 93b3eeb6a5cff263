#pragma once

#include <optional>
#include <vector>

#include "kreindil/numerics.hpp"

namespace kreindil {

/// A generator matrix and, optionally, an equivalent inner product
/// ⟨x, y⟩₀ = y*·M₀·x on the same space.
struct OperatorSpec {
  CMatrix generator;
  std::optional<CMatrix> metric;

  Index dim() const { return generator.rows(); }
  bool has_metric() const { return metric.has_value(); }

  /// Throws InvalidArgument unless the generator is square and finite and the
  /// metric (if any) is Hermitian positive definite of matching size.
  void validate() const;
};

/// e^{tA}. Negative t is allowed.
CMatrix semigroup(const OperatorSpec& spec, double t);

/// (λ − A)^{-1}. Throws SpectrumProximityError when λ lies within
/// 1e-8·‖A‖ of an eigenvalue.
CMatrix resolvent(const OperatorSpec& spec, Complex lambda);

inline constexpr double kResolventEigMargin = 1e-8;

/// Eigenvalues of A, sorted by real part then imaginary part.
std::vector<Complex> spectrum(const OperatorSpec& spec);

/// Support function of the numerical range: s(φ) = λmax(Herm(e^{iφ}A)).
struct NumericalRangeBoundary {
  std::vector<double> angles;
  std::vector<double> support_values;

  /// True if Re(e^{iφ}z) ≤ s(φ) + slack for every sampled φ.
  bool contains(Complex z, double slack = 0.0) const;
};

inline constexpr int kDefaultRangeAngles = 256;

NumericalRangeBoundary numerical_range_boundary(const OperatorSpec& spec,
                                                int n_angles = kDefaultRangeAngles);

/// Central-difference check of A^n T(t) = (d/dt)^n T(t).
struct DerivativeReport {
  int order = 1;
  double t = 0.0;
  double step = 0.0;
  double residual = 0.0;       // at step, relative to max(1, ‖A^n T(t)‖_F)
  double residual_half = 0.0;  // at step/2
  double observed_order = 0.0;
  bool exact = false;  // both residuals vanished identically
};

inline constexpr double kDefaultDifferenceStep = 1e-4;

DerivativeReport check_derivative_identity(const OperatorSpec& spec, double t, int order,
                                           double step = kDefaultDifferenceStep);

/// log2(coarse/fine) for residuals at step and step/2; NaN if either is zero.
double richardson_order(double coarse, double fine);

}  // namespace kreindil
