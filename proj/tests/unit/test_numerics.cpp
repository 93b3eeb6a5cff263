#include <numbers>

#include "helpers.hpp"
#include "kreindil/numerics.hpp"
#include "kreindil/random.hpp"

using namespace kreindil;
using namespace kreindil::testing;

TEST_SUITE("numerics") {

TEST_CASE("expm of zero is the identity") {
  CHECK(expm(CMatrix::Zero(2, 2)) == CMatrix::Identity(2, 2));
}

TEST_CASE("expm of a diagonal matrix") {
  const CMatrix e = expm(diag({-1.0}));
  CHECK(std::abs(e(0, 0) - std::exp(-1.0)) < 1e-15);
}

TEST_CASE("expm of a skew matrix is a rotation") {
  const double t = std::numbers::pi / 3.0;
  const CMatrix e = expm(mat2(0, t, -t, 0));
  const CMatrix rotation = mat2(std::cos(t), std::sin(t), -std::sin(t), std::cos(t));
  CHECK(rel_gap(e, rotation) < 1e-14);
}

TEST_CASE("expm satisfies the group law on commuting pairs") {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix x = 0.7 * random_complex_matrix(rng, 5, 5);
    const CMatrix m = 0.3 * x + 0.1 * x * x;
    const CMatrix n = -0.5 * x + CMatrix::Identity(5, 5) * Complex(0.2, 0.4);
    const CMatrix sum = expm(m + n);
    const double scale = std::max(1.0, sum.norm());
    CHECK((sum - expm(m) * expm(n)).norm() <= 1e-10 * scale);
  }
}

TEST_CASE("expm agrees with the extended-precision version") {
  Rng rng = make_rng(5);
  const CMatrix m = 2.5 * random_complex_matrix(rng, 4, 4);
  const auto ext = expm_extended(m.cast<std::complex<long double>>());
  CHECK(rel_gap(expm(m), ext.cast<Complex>()) < 1e-12);
}

TEST_CASE("expm rejects bad input") {
  CHECK_THROWS_AS(expm(CMatrix::Zero(2, 3)), InvalidArgument);
  CHECK_THROWS_AS(expm(diag({1e6})), NumericsError);
}

TEST_CASE("hermitian_eig sorts eigenvalues in descending order") {
  const HermitianEig eig = hermitian_eig(diag({2.0, -3.0}));
  CHECK(eig.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-3.0));
  // The eigenvectors are the identity columns up to phase.
  CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig of the swap matrix") {
  const HermitianEig eig = hermitian_eig(mat2(0, 1, 1, 0));
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0));
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
  Rng rng = make_rng(3);
  const CMatrix m = random_hermitian(rng, 8);
  const HermitianEig eig = hermitian_eig(m);
  CHECK((eig.reconstruct() - m).norm() <= 1e-12 * m.norm());
  const CMatrix v = eig.eigenvectors;
  CHECK((v.adjoint() * v - CMatrix::Identity(8, 8)).norm() <= 1e-12);
}

TEST_CASE("hermitian_eig is invariant under unitary similarity") {
  Rng rng = make_rng(4);
  const CMatrix m = random_hermitian(rng, 6);
  const CMatrix u = random_unitary(rng, 6);
  const RVector a = hermitian_eig(m).eigenvalues;
  const RVector b = hermitian_eig(u.adjoint() * m * u).eigenvalues;
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()));
}

TEST_CASE("psd_sqrt squares back") {
  Rng rng = make_rng(8);
  const CMatrix x = random_complex_matrix(rng, 4, 4);
  const CMatrix p = x * x.adjoint();
  const CMatrix r = psd_sqrt(p);
  CHECK(rel_gap(r * r, p) < 1e-12);
}

TEST_CASE("integrate_matrix of a constant") {
  const QuadratureResult r = integrate_matrix([](double) { return CMatrix::Identity(2, 2); }, 0, 1);
  CHECK(rel_gap(r.value, CMatrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("integrate_matrix of an exponential") {
  const QuadratureResult r =
      integrate_matrix([](double u) { return diag({std::exp(-2.0 * u)}); }, 0, 1);
  const double exact = (1.0 - std::exp(-2.0)) / 2.0;
  CHECK(std::abs(r.value(0, 0) - exact) <= 1e-12);
  CHECK(r.error_estimate <= 1e-10);
}

TEST_CASE("integrate_matrix is exact on polynomials") {
  const QuadratureResult r =
      integrate_matrix([](double u) { return CMatrix(CMatrix::Identity(3, 3) * u); }, 0, 2);
  CHECK(rel_gap(r.value, 2.0 * CMatrix::Identity(3, 3)) < 1e-14);
}

TEST_CASE("integrate_matrix reports exhausted depth") {
  QuadratureSpec spec;
  spec.max_depth = 1;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-15;
  auto rough = [](double u) { return diag({std::sqrt(std::abs(std::sin(40.0 * u)))}); };
  try {
    integrate_matrix(rough, 0, 3, spec);
    FAIL("expected an accuracy failure");
  } catch (const AccuracyError& e) {
    CHECK(e.achieved() > e.requested());
  }
}

TEST_CASE("QuadratureSpec validation") {
  QuadratureSpec spec;
  spec.abs_tol = 0.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  CHECK_THROWS_AS(integrate_matrix([](double) { return CMatrix::Identity(1, 1); }, 1, 0),
                  InvalidArgument);
}

TEST_CASE("generalized eigenvalue against a hand computation") {
  // A = diag(1, 4), B = diag(1, 2): μ ∈ {1, 2}.
  CHECK(max_generalized_eigenvalue(diag({1.0, 4.0}), diag({1.0, 2.0})) == doctest::Approx(2.0));
}

}
