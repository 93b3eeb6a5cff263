#include <numbers>

#include "helpers.hpp"
#include "kreindil/g_operator.hpp"
#include "kreindil/random.hpp"
#include "kreindil/sectoriality.hpp"

using namespace kreindil;
using namespace kreindil::testing;

TEST_SUITE("g_operator") {

TEST_CASE("H in the plain product") {
  const MetricContext plain = MetricContext::plain(1);
  CHECK(rel_gap(build_H(scalar_spec(-1.0), plain), diag({-2.0})) < 1e-15);
  const CMatrix h = build_H(spec_of(mat2(-1, 2, 0, -1)), MetricContext::plain(2));
  CHECK(rel_gap(h, mat2(-2, 2, 2, -2)) < 1e-15);
}

TEST_CASE("H under a similarity metric") {
  const OperatorSpec spec = similarity_instance();
  const MetricContext ctx = MetricContext::of(spec);
  const CMatrix h = build_H(spec, ctx);
  const CMatrix s = mat2(1, 1, 0, 1);
  CHECK(rel_gap(h, s * diag({-2.0, -2.0}) * s.inverse()) < 1e-14);
  // ⟨Hx, y⟩ = ⟨Ax, y⟩ + ⟨x, Ay⟩ with ⟨x, y⟩ = y*Mx.
  Rng rng = make_rng(1);
  for (int k = 0; k < 20; ++k) {
    const CVector x = random_complex_vector(rng, 2);
    const CVector y = random_complex_vector(rng, 2);
    const Complex lhs = ctx.inner(h * x, y);
    const Complex rhs = ctx.inner(spec.generator * x, y) + ctx.inner(x, spec.generator * y);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(rhs)));
  }
  // H is selfadjoint in the metric: (MH)* = MH.
  const CMatrix mh = ctx.matrix() * h;
  CHECK((mh - mh.adjoint()).norm() <= 1e-14 * mh.norm());
}

TEST_CASE("H_* coincides with H") {
  CHECK(rel_gap(build_H_star(scalar_spec(-1.0), MetricContext::plain(1)), diag({-2.0})) < 1e-15);
  Rng rng = make_rng(2);
  const OperatorSpec plain = spec_of(random_complex_matrix(rng, 4, 4));
  const MetricContext pctx = MetricContext::plain(4);
  const CMatrix h = build_H(plain, pctx);
  CHECK((build_H_star(plain, pctx) - h).norm() <= 1e-13 * h.norm());
  const OperatorSpec metric = generate_instance(4, 0.7, 1.0, true, 5);
  const MetricContext mctx = MetricContext::of(metric);
  const CMatrix hm = build_H(metric, mctx);
  CHECK((build_H_star(metric, mctx) - hm).norm() <= 1e-13 * hm.norm());
}

TEST_CASE("polar parts of a diagonal G") {
  const GDecomposition d = polar_parts(diag({2.0, -3.0}), 1.0, MetricContext::plain(2));
  CHECK(rel_gap(d.J, diag({1.0, -1.0})) < 1e-15);
  CHECK(rel_gap(d.absG, diag({2.0, 3.0})) < 1e-15);
  CHECK(rel_gap(d.Gplus, diag({2.0, 0.0})) < 1e-15);
  CHECK(rel_gap(d.Gminus, diag({0.0, -3.0})) < 1e-15);
  CHECK(d.rank == 2);
}

TEST_CASE("polar parts of zero follow the kernel convention") {
  const GDecomposition d = polar_parts(CMatrix::Zero(2, 2), 0.0, MetricContext::plain(2));
  CHECK(d.J.norm() == 0.0);
  CHECK(d.absG.norm() == 0.0);
  CHECK(d.Gplus.norm() == 0.0);
  CHECK(d.Gminus.norm() == 0.0);
  CHECK(d.rank == 0);
}

TEST_CASE("polar parts of the swap matrix") {
  const CMatrix g = mat2(0, 1, 1, 0);
  const GDecomposition d = polar_parts(g, 0.5, MetricContext::plain(2));
  const CMatrix id = CMatrix::Identity(2, 2);
  CHECK(rel_gap(d.absG, id) < 1e-14);
  CHECK(rel_gap(d.J, g) < 1e-14);
  CHECK(rel_gap(d.Gplus, 0.5 * (g + id)) < 1e-14);
  CHECK(rel_gap(d.Gminus, 0.5 * (g - id)) < 1e-14);
}

TEST_CASE("polar parts refuse G above 2β") {
  CHECK_THROWS_AS(polar_parts(diag({2.0, -3.0}), 0.5, MetricContext::plain(2)), HypothesisError);
}

TEST_CASE("energy derivative in the scalar case") {
  const OperatorSpec spec = scalar_spec(-1.0);
  const MetricContext ctx = MetricContext::plain(1);
  const EnergyDerivativeReport r =
      check_energy_derivative(spec, decompose(spec, 0.0, ctx), ctx, 1.0, 3, 0);
  // Truncation: (d/dt)³e^{−2t}·Δ²/6 ≈ 1.8e−9 at Δ = 1e−4.
  CHECK(r.residual < 2e-9);
  CHECK(r.adjoint_residual < 2e-9);
  CHECK(r.observed_order == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("energy derivative of the zero generator vanishes") {
  const OperatorSpec spec = spec_of(CMatrix::Zero(2, 2));
  const MetricContext ctx = MetricContext::plain(2);
  const EnergyDerivativeReport r =
      check_energy_derivative(spec, decompose(spec, 0.0, ctx), ctx, 1.0, 3, 0);
  CHECK(r.exact);
}

TEST_CASE("energy derivative on generated instances") {
  for (bool metric : {false, true}) {
    const OperatorSpec spec = generate_instance(4, std::numbers::pi / 4, 1.0, metric, 13);
    const MetricContext ctx = MetricContext::of(spec);
    const EnergyDerivativeReport r =
        check_energy_derivative(spec, decompose(spec, 1.0, ctx), ctx, 0.7, 10, 4);
    CHECK(r.residual <= 1e-7);
    CHECK(r.adjoint_residual <= 1e-7);
    CHECK(r.observed_order == doctest::Approx(2.0).epsilon(0.1));
    CHECK(r.adjoint_observed_order == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("polar lemmas on generated instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const double beta = 0.5 * (seed % 4);
    const OperatorSpec spec = generate_instance(2 + seed, 0.7, beta, seed % 2 == 1, seed);
    const MetricContext ctx = MetricContext::of(spec);
    const GDecomposition d = decompose(spec, beta, ctx);
    const PolarLemmaReport r = check_polar_lemmas(spec, d, ctx, 200, seed);
    CHECK(r.operator_residual <= 1e-11);
    CHECK(r.structural_residual <= 1e-11);
    CHECK(r.modulus_violations == 0);
    CHECK(r.negative_violations == 0);
    CHECK(r.positive_violations == 0);
    CHECK(r.h_violations == 0);
    CHECK(r.h_star_violations == 0);
    CHECK(r.h_star_gap <= 1e-13);
  }
}

}
