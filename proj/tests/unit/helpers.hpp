#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include <doctest.h>

#include "kreindil/operator_core.hpp"
#include "kreindil/toeplitz_kernel.hpp"

namespace kreindil::testing {

inline OperatorSpec scalar_spec(Complex a) {
  OperatorSpec spec;
  spec.generator = CMatrix::Constant(1, 1, a);
  return spec;
}

inline CMatrix diag(std::initializer_list<Complex> entries) {
  CMatrix out = CMatrix::Zero(entries.size(), entries.size());
  Index k = 0;
  for (const Complex& e : entries) out(k, k) = e, ++k;
  return out;
}

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix out(2, 2);
  out << a, b, c, d;
  return out;
}

inline OperatorSpec spec_of(CMatrix a) { return OperatorSpec{std::move(a), std::nullopt}; }

inline double rel_gap(const CMatrix& a, const CMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline CVector vec1(Complex x) { return CVector::Constant(1, x); }

/// Scalar function on the given points (0 is added by make if absent).
inline FiniteSupportFunction scalar_h(std::vector<double> points, std::vector<Complex> values) {
  std::vector<CVector> vecs;
  for (const Complex& v : values) vecs.push_back(vec1(v));
  return FiniteSupportFunction::make(std::move(points), std::move(vecs));
}

/// S = [[1,1],[0,1]] with A = S·diag(−1)·S⁻¹ and M₀ = (S S*)⁻¹.
inline OperatorSpec similarity_instance(double eigenvalue = -1.0) {
  const CMatrix s = mat2(1, 1, 0, 1);
  const CMatrix s_inv = s.inverse();
  OperatorSpec spec;
  spec.generator = s * CMatrix::Identity(2, 2) * Complex(eigenvalue) * s_inv;
  spec.metric = (s * s.adjoint()).inverse();
  return spec;
}

}  // namespace kreindil::testing
