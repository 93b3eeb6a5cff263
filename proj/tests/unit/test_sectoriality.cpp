#include <numbers>

#include "helpers.hpp"
#include "kreindil/random.hpp"
#include "kreindil/sectoriality.hpp"

using namespace kreindil;
using namespace kreindil::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("sectoriality") {

TEST_CASE("scalar -1 sits inside the quarter sector") {
  const SectorTest t = check_numerical_range_in_sector(scalar_spec(-1.0), Sector{0.0, kPi / 4});
  CHECK(t.contained);
  // eig of Herm(e^{iψ}(−1)) is −cos ψ, worst at ψ = ±π/4.
  CHECK(t.margin == doctest::Approx(-std::cos(kPi / 4)).epsilon(1e-12));
}

TEST_CASE("positive scalar is outside") {
  CHECK_FALSE(check_numerical_range_in_sector(scalar_spec(1.0), Sector{0.0, kPi / 4}).contained);
}

TEST_CASE("zero sits at the vertex") {
  const SectorTest t = check_numerical_range_in_sector(scalar_spec(0.0), Sector{0.0, 0.3});
  CHECK(t.contained);
  CHECK(t.margin == 0.0);
}

TEST_CASE("sector membership predicate") {
  const Sector s{1.0, kPi / 4};
  CHECK(s.contains(1.0));
  CHECK(s.contains(Complex(0.0, 0.5)));
  CHECK_FALSE(s.contains(Complex(0.0, 1.5)));
  CHECK(s.on_boundary(Complex(0.0, 1.0), 1e-12));
  CHECK_THROWS_AS((Sector{0.0, kPi / 2}.validate()), InvalidArgument);
}

TEST_CASE("scalar resolvent bound") {
  const SectorialityReport r = check_sectorial(scalar_spec(-1.0), 0.0, kPi / 6, {kPi / 2});
  CHECK(r.spectrum_in_sector);
  REQUIRE(r.resolvent_sup.size() == 1);
  // |λ/(λ+1)| over Re λ ≥ 0 approaches 1 from below.
  CHECK(r.resolvent_sup[0].sup_estimate <= 1.0 + 1e-12);
  CHECK(r.resolvent_sup[0].sup_estimate >= 0.999);
}

TEST_CASE("imaginary spectrum is outside every narrow sector") {
  const SectorialityReport r =
      check_sectorial(scalar_spec(Complex(0, 1)), 0.0, kPi / 6, {kPi / 2});
  CHECK_FALSE(r.spectrum_in_sector);
}

TEST_CASE("zero generator has resolvent sup exactly one") {
  const SectorialityReport r = check_sectorial(scalar_spec(0.0), 0.0, kPi / 6, {kPi / 2, 2.5});
  CHECK(r.spectrum_in_sector);
  for (const ResolventSample& s : r.resolvent_sup) CHECK(s.sup_estimate == doctest::Approx(1.0));
}

TEST_CASE("dissipative margins") {
  CHECK(dissipative_margin(spec_of(diag({-1.0, -2.0})), 0.0, false) == doctest::Approx(-1.0));
  CHECK(dissipative_margin(scalar_spec(0.0), 0.0, false) == 0.0);
  const OperatorSpec sim = similarity_instance();
  CHECK(dissipative_margin(sim, 0.0, true) == doctest::Approx(-1.0).epsilon(1e-12));
  // S·(−1)·S⁻¹ is −I, so the plain margin coincides here; a non-normal
  // transport separates the two.
  CHECK(dissipative_margin(sim, 0.0, false) == doctest::Approx(-1.0));
  OperatorSpec skew;
  const CMatrix s = mat2(1, 1, 0, 1);
  skew.generator = s * diag({-1.0, -2.0}) * s.inverse();
  skew.metric = (s * s.adjoint()).inverse();
  CHECK(dissipative_margin(skew, 0.0, true) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(dissipative_margin(skew, 0.0, false) > -1.0);
  CHECK_THROWS_AS(dissipative_margin(scalar_spec(-1.0), 0.0, true), InvalidArgument);
}

TEST_CASE("find_beta closed forms") {
  const BetaSearch a = find_beta(scalar_spec(-1.0), kPi / 4);
  CHECK(a.feasible);
  CHECK(a.beta == 0.0);
  const BetaSearch b = find_beta(scalar_spec(1.0), 0.4);
  CHECK(b.feasible);
  CHECK(std::abs(b.beta - 1.0) <= 2 * kBetaTolerance);
  // Disk of radius 1 touches both rays of S_{β,π/4} when β = 1/sin(π/4).
  const BetaSearch c = find_beta(spec_of(mat2(0, 2, 0, 0)), kPi / 4);
  CHECK(c.feasible);
  CHECK(std::abs(c.beta - std::sqrt(2.0)) <= 1e-7);
}

TEST_CASE("generated scalar instance lies in the sector") {
  const OperatorSpec s = generate_instance(1, kPi / 4, 0.0, false, 17);
  const Complex a = s.generator(0, 0);
  CHECK(a.real() < 0.0);
  CHECK(std::abs(a.imag()) <= std::abs(a.real()));
}

TEST_CASE("generation is deterministic") {
  for (bool metric : {false, true}) {
    const OperatorSpec a = generate_instance(4, 0.7, 0.5, metric, 123);
    const OperatorSpec b = generate_instance(4, 0.7, 0.5, metric, 123);
    CHECK(a.generator == b.generator);
    CHECK(a.metric == b.metric);
  }
  CHECK(generate_instance(4, 0.7, 0.5, false, 1).generator !=
        generate_instance(4, 0.7, 0.5, false, 2).generator);
}

TEST_CASE("generated metric instances satisfy the hypotheses") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double beta = 0.25 * seed;
    const OperatorSpec s = generate_instance(2 + seed % 3, kPi / 4, beta, true, seed);
    CHECK(dissipative_margin(s, beta, true) <= 1e-12);
    CHECK(check_numerical_range_in_sector(s, Sector{beta, kPi / 4}, true).contained);
    const SectorialityReport r =
        check_sectorial(s, beta, kPi / 4, default_resolvent_angles(kPi / 4), true);
    CHECK(r.spectrum_in_sector);
    CHECK(r.metric_lower.value() <= r.metric_upper.value());
  }
}

TEST_CASE("dissipative generators have contractive resolvents") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const OperatorSpec b = generate_instance(3 + seed, 0.6, 0.0, false, seed);
    for (const Complex& z : spectrum(b)) CHECK(z.real() <= 0.0);
    CHECK(resolvent_contraction_ratio(b, 50, seed) <= 1.0 + 1e-8);
  }
}

TEST_CASE("growth and holomorphic bounds") {
  std::vector<double> times;
  for (int k = 1; k <= 30; ++k) times.push_back(0.1 * k);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const double beta = 0.5 * seed;
    const OperatorSpec plain = generate_instance(3, kPi / 4, beta, false, seed);
    CHECK(growth_ratio(plain, beta, times, false) <= 1.0 + 1e-9);
    CHECK(holomorphic_contraction(plain, beta, kPi / 4, 100, seed, false) <= 1.0 + 1e-9);
    const OperatorSpec metric = generate_instance(3, kPi / 4, beta, true, seed);
    CHECK(growth_ratio(metric, beta, times, true) <= 1.0 + 1e-9);
    CHECK(holomorphic_contraction(metric, beta, kPi / 4, 100, seed, true) <= 1.0 + 1e-9);
  }
}

}
