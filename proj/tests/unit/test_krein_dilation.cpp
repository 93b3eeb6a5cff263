#include <numbers>

#include "helpers.hpp"
#include "kreindil/krein_dilation.hpp"
#include "kreindil/random.hpp"
#include "kreindil/sectoriality.hpp"

using namespace kreindil;
using namespace kreindil::testing;

TEST_SUITE("krein_dilation") {

TEST_CASE("contraction section is a Kac-Murdock-Szego matrix") {
  const KreinSection s = KreinSection::build(Semigroup(scalar_spec(-1.0)), 1.0, 1);
  CMatrix kms(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) kms(r, c) = std::exp(-std::abs(r - c));
  CHECK(rel_gap(s.gram(), kms) < 1e-15);
  CHECK(s.signature() == Signature{3, 0, 0});
}

TEST_CASE("expansive two-point Gram is indefinite") {
  // f(u) = e^{|u|}: the Gram on {0, 1} is [[1, e], [e, 1]] with eigenvalues 1 ± e.
  const Semigroup sg(scalar_spec(1.0));
  const CMatrix g = f_gram(sg, {0.0, 1.0}).matrix;
  const double e = std::exp(1.0);
  CHECK(rel_gap(g, mat2(1, e, e, 1)) < 1e-15);
  const HermitianEig eig = hermitian_eig(g);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1 + e));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1 - e));
  const KreinSection s = KreinSection::build(sg, 1.0, 1);
  CHECK(s.signature().negative >= 1);
  CHECK(s.signature().positive >= 1);
}

TEST_CASE("empty window is the base space") {
  const Semigroup sg(generate_instance(3, 0.7, 1.0, false, 4));
  const KreinSection s = KreinSection::build(sg, 0.5, 0);
  CHECK(s.gram() == CMatrix::Identity(3, 3));
  CHECK(s.signature() == Signature{3, 0, 0});
}

TEST_CASE("section is block-Toeplitz and restricts to principal submatrices") {
  const Semigroup sg(generate_instance(2, 0.7, 1.0, true, 5));
  const KreinSection s = KreinSection::build(sg, 0.25, 4);
  const Index n = 2;
  for (int r = -4; r <= 4; ++r) {
    for (int c = -4; c <= 4; ++c) {
      if (r + 1 > 4 || c + 1 > 4) continue;
      CHECK(s.gram().block(s.offset(r), s.offset(c), n, n) ==
            s.gram().block(s.offset(r + 1), s.offset(c + 1), n, n));
    }
  }
  const KreinSection small = s.restricted(2);
  CHECK(small.gram() == s.gram().block(s.offset(-2), s.offset(-2), 5 * n, 5 * n));
}

TEST_CASE("shift is a Kreĭn isometry and moves kernel vectors") {
  for (double a : {-1.0, 1.0}) {
    const Semigroup sg(scalar_spec(a));
    const double delta = 0.5;
    const KreinSection s = KreinSection::build(sg, delta, 3);
    const ShiftOperator u(s);
    CHECK(u.gram_isometry_defect() <= 1e-12);
    CHECK(u.quotient_isometry_defect() <= 1e-12);
    const CVector h = vec1(Complex(1, -2));
    const CVector g = vec1(Complex(0.5, 0.3));
    const Complex one = s.inner(u.apply(s.embed(h), 1), s.embed(g));
    const Complex two = s.inner(u.apply(s.embed(h), 2), s.embed(g));
    const Complex expected_one = std::conj(g(0)) * std::exp(a * delta) * h(0);
    const Complex expected_two = std::conj(g(0)) * std::exp(2 * a * delta) * h(0);
    CHECK(std::abs(one - expected_one) <= 1e-10 * std::abs(expected_one));
    CHECK(std::abs(two - expected_two) <= 1e-10 * std::abs(expected_two));
    CHECK_THROWS_AS(u.apply(s.embed(h), 4), DomainError);
  }
}

TEST_CASE("compression of scalar semigroups") {
  const CVector h = vec1(Complex(0.7, 0.2));
  {
    const Semigroup sg(scalar_spec(-1.0));
    const KreinSection s = KreinSection::build(sg, 0.5, 2);
    const ShiftOperator u(s);
    CHECK((compress(s, u, 0, h).value - h).norm() <= 1e-12);
    CHECK((compress(s, u, 1, h).value - std::exp(-0.5) * h).norm() <= 1e-10);
  }
  {
    const Semigroup sg(scalar_spec(1.0));
    const KreinSection s = KreinSection::build(sg, 0.5, 2);
    const ShiftOperator u(s);
    CHECK((compress(s, u, -1, h).value - std::exp(0.5) * h).norm() <= 1e-10);
    CHECK_THROWS_AS(compress(s, u, 3, h), DomainError);
  }
}

TEST_CASE("dilation of generated instances in the active geometry") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const double beta = 0.5 * seed;
    const Semigroup sg(generate_instance(2 + seed % 2, 0.7, beta, seed % 2 == 1, seed));
    const DilationReport r = dilate(sg, 0.25, 6);
    CHECK(r.max_compression_error <= 1e-8);
    CHECK(r.quotient_isometry_defect <= 1e-10);
    CHECK(r.regularity_defect <= 1e-9);
    CHECK(r.gram_consistency <= 1e-10);
    CHECK(r.compression.size() == 13);
    for (std::size_t k = 1; k < r.signature_trace.size(); ++k) {
      CHECK(r.signature_trace[k].signature.negative >= r.signature_trace[k - 1].signature.negative);
    }
  }
}

TEST_CASE("dissipative instances give Hilbert-space sections") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Semigroup sg(generate_instance(3, 0.7, 0.0, false, seed));
    const DilationReport r = dilate(sg, 0.25, 5);
    for (const SignatureRow& row : r.signature_trace) {
      CHECK(row.signature.negative == 0);
      CHECK(row.signature.degenerate == 0);
    }
    REQUIRE(r.cholesky_compression_gap.has_value());
    CHECK(*r.cholesky_compression_gap <= 1e-8);
    CHECK(*r.cholesky_residual <= 1e-12);
  }
}

TEST_CASE("a cutoff that swallows the base space is a regularity failure") {
  const Semigroup sg(scalar_spec(-1.0));
  CHECK_THROWS_AS(dilate(sg, 0.01, 4, 0.5), RegularityError);
}

TEST_CASE("metric path with the identity metric is the plain path") {
  OperatorSpec spec = generate_instance(3, 0.7, 1.0, false, 7);
  const DilationReport plain = dilate(Semigroup(spec), 0.25, 4);
  spec.metric = CMatrix::Identity(3, 3);
  const DilationReport viametric = dilate_with_metric(spec, 0.25, 4);
  REQUIRE(plain.compression.size() == viametric.compression.size());
  for (std::size_t k = 0; k < plain.compression.size(); ++k) {
    CHECK(plain.compression[k].error == viametric.compression[k].error);
  }
  CHECK(plain.signature == viametric.signature);
  CHECK(plain.regularity_defect == viametric.regularity_defect);
}

TEST_CASE("metric path on a similarity instance") {
  const DilationReport r = dilate_with_metric(similarity_instance(), 0.25, 8, kDegeneracyCutoff, 0.0);
  CHECK(r.metric_path);
  CHECK(r.max_compression_error <= 1e-8);
  CHECK(r.quotient_isometry_defect <= 1e-10);
  CHECK(r.regularity_defect <= 1e-9);
  REQUIRE(r.sandwich_violation.has_value());
  CHECK(*r.sandwich_violation <= 1e-12);
}

TEST_CASE("metric path refuses a failed hypothesis") {
  OperatorSpec spec = scalar_spec(1.0);
  spec.metric = diag({2.0});
  CHECK_THROWS_AS(dilate_with_metric(spec, 0.25, 2, kDegeneracyCutoff, 0.0), HypothesisError);
  CHECK_THROWS_AS(dilate_with_metric(scalar_spec(-1.0), 0.25, 2), InvalidArgument);
}

TEST_CASE("metric path reproduces the transported semigroup") {
  const DilationReport r = dilate_with_metric(generate_instance(3, 0.7, 0.5, true, 3), 0.25, 6);
  REQUIRE(r.max_transported_error.has_value());
  CHECK(*r.max_transported_error <= 1e-8);
  CHECK(r.quotient_isometry_defect <= 1e-10);
  CHECK(r.regularity_defect <= 1e-9);
}

}
