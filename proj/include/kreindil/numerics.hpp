#pragma once

// Dense complex-matrix primitives: matrix exponential, Hermitian
// eigendecomposition and adaptive matrix-valued quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "kreindil/errors.hpp"

namespace kreindil {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
struct HermitianEig {
  RVector eigenvalues;
  CMatrix eigenvectors;  // unitary, column k pairs with eigenvalues[k]
  double asymmetry = 0.0;  // ‖M − M*‖_F / ‖M‖_F of the input before symmetrizing

  CMatrix reconstruct() const;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 40;

  void validate() const;
};

struct QuadratureResult {
  CMatrix value;
  double error_estimate = 0.0;
  int evaluations = 0;
};

using MatrixFunction = std::function<CMatrix(double)>;

// Asymmetry above this fraction of ‖M‖_F is reported on HermitianEig.
inline constexpr double kAsymmetryReportLevel = 1e-12;

void require_square(const CMatrix& m, const char* what);
void require_finite(const CMatrix& m, const char* what);

/// e^M by scaling and squaring with diagonal Padé approximants (degree ≤ 13).
CMatrix expm(const CMatrix& m);

/// Same algorithm carried out in extended precision. Finite-difference
/// checks use this so that cancellation does not swamp the truncation error.
Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic> expm_extended(
    const Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>& m);

/// Factor (M + M*)/2. The measured asymmetry is stored on the result.
HermitianEig hermitian_eig(const CMatrix& m);

/// Apply a real function to the spectrum of a Hermitian matrix.
CMatrix hermitian_function(const HermitianEig& eig, const std::function<double(double)>& fn);

/// Positive square root of a positive semidefinite matrix.
CMatrix psd_sqrt(const CMatrix& m);

/// ∫_a^b fn(u) du by globally adaptive Gauss–Kronrod 7/15 on the Frobenius
/// norm of the entrywise error.
QuadratureResult integrate_matrix(const MatrixFunction& fn, double a, double b,
                                  const QuadratureSpec& spec = {});

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Spectral norm.
double norm2(const CMatrix& m);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const CMatrix& hermitian);

/// Largest μ with A x = μ B x, A Hermitian and B Hermitian positive definite.
double max_generalized_eigenvalue(const CMatrix& a, const CMatrix& b);

}  // namespace kreindil
