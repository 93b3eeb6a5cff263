#include "kreindil/operator_core.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kreindil {

void OperatorSpec::validate() const {
  require_square(generator, "OperatorSpec generator");
  require_finite(generator, "OperatorSpec generator");
  if (generator.rows() == 0) throw InvalidArgument("OperatorSpec: dimension must be >= 1");
  if (!metric) return;
  const CMatrix& m = *metric;
  if (m.rows() != generator.rows() || m.cols() != generator.cols()) {
    throw InvalidArgument("OperatorSpec: metric size does not match the generator");
  }
  require_finite(m, "OperatorSpec metric");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-12 * std::max(scale, 1.0)) {
    throw InvalidArgument("OperatorSpec: metric is not Hermitian");
  }
  const HermitianEig eig = hermitian_eig(m);
  const double smallest = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (!(smallest > 0.0)) {
    std::ostringstream os;
    os << "OperatorSpec: metric is not positive definite (smallest eigenvalue " << smallest
       << ")";
    throw InvalidArgument(os.str());
  }
}

CMatrix semigroup(const OperatorSpec& spec, double t) { return expm(t * spec.generator); }

CMatrix resolvent(const OperatorSpec& spec, Complex lambda) {
  const CMatrix& a = spec.generator;
  require_square(a, "resolvent");
  const double margin = kResolventEigMargin * std::max(norm2(a), 1.0);
  for (const Complex& mu : spectrum(spec)) {
    if (std::abs(lambda - mu) <= margin) {
      std::ostringstream os;
      os << "resolvent: λ = " << lambda << " is within " << margin << " of eigenvalue " << mu;
      throw SpectrumProximityError(os.str());
    }
  }
  const Index n = a.rows();
  const CMatrix shifted = lambda * CMatrix::Identity(n, n) - a;
  return shifted.partialPivLu().solve(CMatrix::Identity(n, n));
}

std::vector<Complex> spectrum(const OperatorSpec& spec) {
  require_square(spec.generator, "spectrum");
  Eigen::ComplexEigenSolver<CMatrix> solver(spec.generator, false);
  if (solver.info() != Eigen::Success) throw NumericsError("spectrum: no convergence");
  std::vector<Complex> out(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

bool NumericalRangeBoundary::contains(Complex z, double slack) const {
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double projection = (std::polar(1.0, angles[k]) * z).real();
    if (projection > support_values[k] + slack) return false;
  }
  return true;
}

NumericalRangeBoundary numerical_range_boundary(const OperatorSpec& spec, int n_angles) {
  if (n_angles < 8) throw InvalidArgument("numerical_range_boundary: n_angles must be >= 8");
  NumericalRangeBoundary out;
  out.angles.reserve(n_angles);
  out.support_values.reserve(n_angles);
  for (int k = 0; k < n_angles; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n_angles;
    out.angles.push_back(phi);
    out.support_values.push_back(max_eigenvalue(hermitian_part(std::polar(1.0, phi) * spec.generator)));
  }
  return out;
}

double richardson_order(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / fine);
}

namespace {

using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

// e^X − I without forming e^X first, so that small X keeps its relative accuracy.
LMatrix expm_minus_identity(const LMatrix& x) {
  const Index n = x.rows();
  if (x.cwiseAbs().colwise().sum().maxCoeff() > 0.5L) {
    return expm_extended(x) - LMatrix::Identity(n, n);
  }
  LMatrix term = x;
  LMatrix sum = x;
  for (int k = 2; k < 60; ++k) {
    term = term * x / static_cast<long double>(k);
    sum += term;
    if (term.norm() <= std::numeric_limits<long double>::epsilon() * sum.norm()) break;
  }
  return sum;
}

// Central difference quotients of T at t. The differences are formed as
// T(t)·(T(±Δ) − I) by the group law, which is algebraically the same quotient
// but avoids subtracting two O(1) matrices.
double derivative_residual(const LMatrix& a, long double step, int order,
                           const LMatrix& centre, const LMatrix& target) {
  const LMatrix up = expm_minus_identity(a * step);
  const LMatrix down = expm_minus_identity(a * -step);
  const LMatrix estimate = order == 1 ? LMatrix(centre * (up - down) / (2.0L * step))
                                      : LMatrix(centre * (up + down) / (step * step));
  return static_cast<double>((estimate - target).norm());
}

}  // namespace

DerivativeReport check_derivative_identity(const OperatorSpec& spec, double t, int order,
                                           double step) {
  if (!(t > 0.0)) throw InvalidArgument("check_derivative_identity: t must be > 0");
  if (order != 1 && order != 2) throw InvalidArgument("check_derivative_identity: order must be 1 or 2");
  if (!(step > 0.0) || t - step <= 0.0 || step / 2.0 < std::numeric_limits<double>::min()) {
    throw NumericsError("check_derivative_identity: step underflow or step >= t");
  }
  const LMatrix a = spec.generator.cast<std::complex<long double>>();
  const LMatrix tt = expm_extended(a * static_cast<long double>(t));
  LMatrix target = a * tt;
  if (order == 2) target = a * target;
  const double scale = std::max(1.0, static_cast<double>(target.norm()));

  DerivativeReport out;
  out.order = order;
  out.t = t;
  out.step = step;
  out.residual = derivative_residual(a, step, order, tt, target) / scale;
  out.residual_half = derivative_residual(a, step / 2.0L, order, tt, target) / scale;
  out.exact = out.residual == 0.0 && out.residual_half == 0.0;
  out.observed_order = richardson_order(out.residual, out.residual_half);
  return out;
}

}  // namespace kreindil
