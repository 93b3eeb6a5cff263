#include <numbers>

#include "helpers.hpp"
#include "kreindil/random.hpp"
#include "kreindil/sectoriality.hpp"
#include "kreindil/toeplitz_kernel.hpp"

using namespace kreindil;
using namespace kreindil::testing;

namespace {

struct Model {
  Semigroup sg;
  GDecomposition decomp;
};

Model model_of(const OperatorSpec& spec, double beta) {
  Semigroup sg(spec);
  GDecomposition d = decompose(spec, beta, sg.metric());
  return {std::move(sg), std::move(d)};
}

FiniteSupportFunction random_h(Rng& rng, Index dim, int count, double span) {
  std::vector<double> points;
  std::vector<CVector> vecs;
  while (static_cast<int>(points.size()) < count) {
    const double p = uniform(rng, -span, span);
    bool crowded = std::abs(p) < 1e-3;
    for (double q : points) crowded = crowded || std::abs(p - q) < 1e-3;
    if (crowded) continue;
    points.push_back(p);
    vecs.push_back(random_complex_vector(rng, dim));
  }
  points.push_back(0.0);
  vecs.push_back(random_complex_vector(rng, dim));
  return FiniteSupportFunction::make(points, vecs);
}

}  // namespace

TEST_SUITE("toeplitz_kernel") {

TEST_CASE("f is Hermitian with f(0) = I") {
  const Semigroup scalar(scalar_spec(-1.0));
  CHECK(f_value(scalar, 0.0) == CMatrix::Identity(1, 1));
  CHECK(std::abs(f_value(scalar, -2.0)(0, 0) - std::exp(-2.0)) < 1e-15);
  Rng rng = make_rng(3);
  const Semigroup plain(spec_of(random_complex_matrix(rng, 3, 3)));
  CHECK(rel_gap(f_value(plain, -1.3), f_value(plain, 1.3).adjoint()) < 1e-12);
  const Semigroup metric(generate_instance(3, 0.7, 0.5, true, 2));
  const MetricContext& ctx = metric.metric();
  CHECK(rel_gap(f_value(metric, -1.3), ctx.adjoint(f_value(metric, 1.3))) < 1e-12);
}

TEST_CASE("contraction kernel is e^{-|s-t|}") {
  const Model m = model_of(scalar_spec(-1.0), 0.0);
  CHECK(std::abs(kernel_value(m.sg, m.decomp, 1.0, 2.0).value(0, 0) - std::exp(-1.0)) < 1e-12);
  Rng rng = make_rng(4);
  for (int k = 0; k < 20; ++k) {
    const double s = uniform(rng, -3, 3), t = uniform(rng, -3, 3);
    const Complex v = kernel_value(m.sg, m.decomp, s, t).value(0, 0);
    CHECK(std::abs(v - std::exp(-std::abs(s - t))) <= 1e-10 * std::exp(-std::abs(s - t)));
  }
}

TEST_CASE("kernel at the origin is the identity") {
  const Model m = model_of(generate_instance(3, 0.7, 1.0, false, 1), 1.0);
  CHECK(rel_gap(kernel_value(m.sg, m.decomp, 0.0, 0.0).value, CMatrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("expansive scalar kernel") {
  const Model m = model_of(scalar_spec(1.0), 1.0);
  const double e = std::exp(1.0);
  CHECK(std::abs(kernel_value(m.sg, m.decomp, 1.0, 1.0).value(0, 0) - (2 * e * e - 1)) < 1e-10);
  // Both arguments negative: 2e^{|s|+|t|} − e^{|s−t|}.
  const Complex neg = kernel_value(m.sg, m.decomp, -0.5, -1.5).value(0, 0);
  CHECK(std::abs(neg - (2 * std::exp(2.0) - std::exp(1.0))) < 1e-10);
  // Mixed signs: f(t − s) with f(u) = e^{|u|}.
  CHECK(std::abs(kernel_value(m.sg, m.decomp, -0.5, 1.0).value(0, 0) - std::exp(1.5)) < 1e-12);
}

TEST_CASE("kernel Gram is Hermitian") {
  const Model m = model_of(generate_instance(3, 0.7, 1.0, true, 8), 1.0);
  Rng rng = make_rng(8);
  std::vector<double> points;
  for (int k = 0; k < 10; ++k) points.push_back(uniform(rng, -2, 2));
  const BlockGram k = k_gram(m.sg, m.decomp, points);
  CHECK((k.matrix - k.matrix.adjoint()).norm() <= 1e-9 * k.matrix.norm());
  const BlockGram f = f_gram(m.sg, points);
  CHECK((f.matrix - f.matrix.adjoint()).norm() <= 1e-12 * f.matrix.norm());
}

TEST_CASE("v-transform of simple supports") {
  const Semigroup sg(scalar_spec(Complex(-0.5, 0.3)));
  const Complex x(1.0, 2.0), y(-0.5, 0.25);
  const VTransform single = v_transform(sg, scalar_h({0.0}, {x}));
  CHECK(std::abs(single.values[0](0) - x) < 1e-15);

  const double tau = 0.7;
  const VTransform right = v_transform(sg, scalar_h({0.0, tau}, {x, y}));
  CHECK(std::abs(right.values[1](0) - y) < 1e-15);
  CHECK(std::abs(right.values[0](0) - (x + sg.forward(tau)(0, 0) * y)) < 1e-14);

  const double sigma = -0.7;
  const VTransform left = v_transform(sg, scalar_h({sigma, 0.0}, {y, x}));
  CHECK(std::abs(left.values[0](0) - y) < 1e-15);
  CHECK(std::abs(left.values[1](0) - (x + std::conj(sg.forward(-sigma)(0, 0)) * y)) < 1e-14);
}

TEST_CASE("h_from_v inverts the v-transform") {
  const Semigroup scalar(scalar_spec(Complex(-0.5, 0.3)));
  const FiniteSupportFunction two = scalar_h({0.0, 0.7}, {1.0, Complex(0, 1)});
  const FiniteSupportFunction back = h_from_v(scalar, v_transform(scalar, two));
  CHECK(std::abs(back.vectors[1](0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(back.vectors[0](0) - 1.0) < 1e-14);

  for (bool metric : {false, true}) {
    const Semigroup sg(generate_instance(4, 0.7, 1.0, metric, 6));
    Rng rng = make_rng(6);
    const FiniteSupportFunction h = random_h(rng, 4, 5, 2.0);
    const VTransform v = v_transform(sg, h);
    CHECK(v.seam_mismatch <= 1e-12);
    const FiniteSupportFunction r = h_from_v(sg, v);
    for (std::size_t k = 0; k < h.size(); ++k) {
      CHECK((r.vectors[k] - h.vectors[k]).norm() <= 1e-10);
    }
  }
}

TEST_CASE("forms on a single point") {
  const Model m = model_of(generate_instance(2, 0.7, 1.0, false, 3), 1.0);
  CVector x(2);
  x << Complex(1, 1), Complex(-2, 0.5);
  const FiniteSupportFunction h = FiniteSupportFunction::make({0.0}, {x});
  CHECK(s_f(m.sg, m.decomp, h).value == doctest::Approx(x.squaredNorm()));
  CHECK(s_k(m.sg, m.decomp, h).value == doctest::Approx(x.squaredNorm()));
}

TEST_CASE("contraction forms coincide") {
  const Model m = model_of(scalar_spec(-1.0), 0.0);
  const FiniteSupportFunction h = scalar_h({0.0, 1.0}, {1.0, 1.0});
  const FormEvaluation f = s_f(m.sg, m.decomp, h);
  const FormEvaluation k = s_k(m.sg, m.decomp, h);
  CHECK(f.value == doctest::Approx(2.0 + 2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(k.value == doctest::Approx(2.0 + 2.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(f.routes_agree);
  CHECK(k.routes_agree);
}

TEST_CASE("expansive scalar forms") {
  // k(0,0) = 1, k(1,1) = 2e² − 1, k(0,1) = e; f(±1) = e.
  const Model m = model_of(scalar_spec(1.0), 1.0);
  const FiniteSupportFunction h = scalar_h({0.0, 1.0}, {1.0, -std::exp(-1.0)});
  const FormEvaluation f = s_f(m.sg, m.decomp, h);
  const FormEvaluation k = s_k(m.sg, m.decomp, h);
  CHECK(f.value == doctest::Approx(std::exp(-2.0) - 1.0).epsilon(1e-13));
  CHECK(k.value == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-10));
  CHECK(f.relative_gap() <= 1e-7);
  CHECK(k.relative_gap() <= 1e-7);
}

TEST_CASE("h' for signs of G") {
  // A = −1: G = −2, J = −1 and v' = −Jv = v off 0, so h' = h.
  const Model contraction = model_of(scalar_spec(-1.0), 0.0);
  const FiniteSupportFunction h = scalar_h({-0.6, 0.0, 1.0}, {0.3, 1.0, Complex(0, -0.5)});
  const FiniteSupportFunction hp = h_prime(contraction.sg, contraction.decomp, h);
  for (std::size_t k = 0; k < h.size(); ++k) CHECK(std::abs(hp.vectors[k](0) - h.vectors[k](0)) < 1e-13);

  // A = +1: J = 1 flips v off 0.
  const Model expansive = model_of(scalar_spec(1.0), 1.0);
  const FiniteSupportFunction hq = h_prime(expansive.sg, expansive.decomp, h);
  const VTransform v = v_transform(expansive.sg, h);
  const VTransform vq = v_transform(expansive.sg, hq);
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Complex expected = v.points[k] == 0.0 ? v.values[k](0) : -v.values[k](0);
    CHECK(std::abs(vq.values[k](0) - expected) < 1e-12);
  }
}

TEST_CASE("h' has the prescribed v-transform on generated instances") {
  for (bool metric : {false, true}) {
    const Model m = model_of(generate_instance(3, 0.7, 1.5, metric, 12), 1.5);
    Rng rng = make_rng(12);
    const FiniteSupportFunction h = random_h(rng, 3, 5, 2.0);
    const FiniteSupportFunction hp = h_prime(m.sg, m.decomp, h);
    const VTransform v = v_transform(m.sg, h);
    const VTransform vp = v_transform(m.sg, hp);
    for (std::size_t k = 0; k < v.points.size(); ++k) {
      const CVector expected = v.points[k] == 0.0 ? v.values[k] : CVector(-(m.decomp.J * v.values[k]));
      CHECK((vp.values[k] - expected).norm() <= 1e-9 * std::max(1.0, expected.norm()));
    }
  }
}

TEST_CASE("h' requires a positive form") {
  // A = 0: k(s,t) = I on [0,∞)², so h(0) = −h(1) has S_k = 0.
  const Model m = model_of(spec_of(CMatrix::Zero(1, 1)), 0.0);
  const FiniteSupportFunction h = scalar_h({0.0, 1.0}, {-1.0, 1.0});
  CHECK(s_k(m.sg, m.decomp, h).value == doctest::Approx(0.0));
  CHECK_THROWS_AS(h_prime(m.sg, m.decomp, h), PreconditionError);
  CHECK_THROWS_AS(check_condition_iii(m.sg, m.decomp, h), PreconditionError);
}

TEST_CASE("condition iii in closed-form cases") {
  const Model m = model_of(scalar_spec(-1.0), 0.0);
  const ConditionIIIReport one = check_condition_iii(m.sg, m.decomp, scalar_h({0.0}, {2.0}));
  CHECK(one.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.sk == doctest::Approx(4.0));
  const ConditionIIIReport two =
      check_condition_iii(m.sg, m.decomp, scalar_h({0.0, 1.0}, {1.0, Complex(0.5, -1)}));
  CHECK(std::abs(two.ratio - 1.0) <= 1e-8);
  CHECK(two.passed);
}

TEST_CASE("majorization") {
  const Model scalar = model_of(scalar_spec(-1.0), 0.0);
  const MajorizationReport single = check_majorization(scalar.sg, scalar.decomp, scalar_h({0.0}, {3.0}));
  CHECK(single.passed);
  CHECK(std::abs(single.slack) <= 1e-12 * single.scale);
  Rng rng = make_rng(14);
  for (int k = 0; k < 10; ++k) {
    const MajorizationReport r = check_majorization(scalar.sg, scalar.decomp, random_h(rng, 1, 4, 2.0));
    CHECK(r.passed);
    CHECK(std::abs(r.slack) <= 1e-9 * r.scale);  // f = k
  }
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const double beta = 0.5 * (seed % 4);
    const Model m = model_of(generate_instance(1 + seed, 0.7, beta, seed % 2 == 0, seed), beta);
    for (int k = 0; k < 8; ++k) {
      const MajorizationReport r = check_majorization(m.sg, m.decomp, random_h(rng, 1 + seed, 4, 2.0));
      CHECK(r.passed);
      CHECK(r.sk >= -1e-9 * r.scale);
    }
  }
}

TEST_CASE("translation bound") {
  const Model contraction = model_of(scalar_spec(-1.0), 0.0);
  Rng rng = make_rng(15);
  const FiniteSupportFunction h = random_h(rng, 1, 4, 2.0);
  const TranslationReport zero = check_translation_bound(contraction.sg, contraction.decomp, h, 0.0, 0.0);
  CHECK(zero.passed);
  CHECK(zero.ratio == doctest::Approx(1.0));
  for (double xi : {-1.0, -0.25, 0.25, 1.0}) {
    const TranslationReport r = check_translation_bound(contraction.sg, contraction.decomp, h, xi, 0.0);
    CHECK(r.passed);
    CHECK(r.s_xi <= r.s0 * (1.0 + 1e-8));
  }
  const Model expansive = model_of(scalar_spec(1.0), 1.0);
  for (int k = 0; k < 5; ++k) {
    const FiniteSupportFunction g = random_h(rng, 1, 4, 2.0);
    for (double xi : {-1.0, -0.25, 0.25, 1.0}) {
      const TranslationReport r = check_translation_bound(expansive.sg, expansive.decomp, g, xi, 1.0);
      CHECK(r.passed);
      CHECK(r.rho == doctest::Approx(std::exp(8.0 * std::abs(xi))));
      CHECK(r.observed_exponent <= 8.0);
    }
  }
}

TEST_CASE("case analysis reproduces the shifted form") {
  Rng rng = make_rng(16);
  for (bool metric : {false, true}) {
    const Model m = model_of(generate_instance(3, 0.7, 1.0, metric, 16), 1.0);
    for (int k = 0; k < 4; ++k) {
      const FiniteSupportFunction h = random_h(rng, 3, 4, 2.0);
      for (double xi : {-1.0, -0.5, 0.25, 1.0}) {
        const double direct = s_k(m.sg, m.decomp, h.shifted(xi)).value;
        const double cases = translation_by_cases(m.sg, m.decomp, h, xi);
        CHECK(std::abs(cases - direct) <= 1e-8 * std::max(1.0, std::abs(direct)));
      }
    }
  }
}

TEST_CASE("finite support construction") {
  const FiniteSupportFunction h = scalar_h({1.0, -1.0, 1.0 + 1e-13}, {1.0, 2.0, 3.0});
  REQUIRE(h.size() == 3);  // −1, 0 (inserted), 1 (merged)
  CHECK(h.points[1] == 0.0);
  CHECK(h.vectors[1](0) == 0.0);
  CHECK(h.vectors[2](0) == 4.0);
  CHECK(h.negative_count() == 1);
  const FiniteSupportFunction moved = h.shifted(0.5);
  CHECK(moved.points.front() == doctest::Approx(-0.5));
  CHECK_THROWS_AS(FiniteSupportFunction::make({0.0}, {}), InvalidArgument);
}

}
