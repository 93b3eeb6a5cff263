#include "kreindil/metric.hpp"

#include <sstream>

namespace kreindil {

MetricContext MetricContext::plain(Index dim) {
  MetricContext ctx;
  const CMatrix id = CMatrix::Identity(dim, dim);
  ctx.matrix_ = id;
  ctx.inverse_ = id;
  ctx.sqrt_ = id;
  ctx.inv_sqrt_ = id;
  return ctx;
}

MetricContext MetricContext::from_matrix(const CMatrix& m) {
  require_square(m, "MetricContext");
  require_finite(m, "MetricContext");
  if (m == CMatrix::Identity(m.rows(), m.cols())) return plain(m.rows());

  const HermitianEig eig = hermitian_eig(m);
  if (eig.asymmetry > 1e-12) throw InvalidArgument("MetricContext: metric is not Hermitian");
  const double lo = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "MetricContext: metric is not positive definite (smallest eigenvalue " << lo << ")";
    throw InvalidArgument(os.str());
  }
  MetricContext ctx;
  ctx.identity_ = false;
  ctx.matrix_ = hermitian_part(m);
  ctx.inverse_ = hermitian_function(eig, [](double x) { return 1.0 / x; });
  ctx.sqrt_ = hermitian_function(eig, [](double x) { return std::sqrt(x); });
  ctx.inv_sqrt_ = hermitian_function(eig, [](double x) { return 1.0 / std::sqrt(x); });
  ctx.min_eig_ = lo;
  ctx.max_eig_ = eig.eigenvalues[0];
  return ctx;
}

MetricContext MetricContext::of(const OperatorSpec& spec) {
  return spec.metric ? from_matrix(*spec.metric) : plain(spec.dim());
}

CMatrix MetricContext::adjoint(const CMatrix& x) const {
  if (identity_) return x.adjoint();
  return inverse_ * x.adjoint() * matrix_;
}

Complex MetricContext::inner(const CVector& x, const CVector& y) const {
  if (identity_) return y.dot(x);
  return y.dot(matrix_ * x);
}

double MetricContext::norm_sq(const CVector& x) const {
  if (identity_) return x.squaredNorm();
  return x.dot(matrix_ * x).real();
}

double MetricContext::form(const CMatrix& x, const CVector& v) const {
  return inner(x * v, v).real();
}

CMatrix MetricContext::to_orthonormal(const CMatrix& x) const {
  if (identity_) return x;
  return sqrt_ * x * inv_sqrt_;
}

CMatrix MetricContext::from_orthonormal(const CMatrix& x) const {
  if (identity_) return x;
  return inv_sqrt_ * x * sqrt_;
}

double MetricContext::op_norm(const CMatrix& x) const { return norm2(to_orthonormal(x)); }

double MetricContext::lower_equivalence() const { return 1.0 / std::sqrt(max_eig_); }

double MetricContext::upper_equivalence() const { return 1.0 / std::sqrt(min_eig_); }

}  // namespace kreindil
