#include "kreindil/sectoriality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kreindil/random.hpp"

namespace kreindil {

namespace {

constexpr double kPi = std::numbers::pi;

double scale_of(const CMatrix& a) { return std::max(1.0, norm2(a)); }

CMatrix shifted(const OperatorSpec& spec, double beta) {
  return spec.generator - beta * CMatrix::Identity(spec.dim(), spec.dim());
}

void require_theta(double theta, const char* what) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) {
    throw InvalidArgument(std::string(what) + ": theta must lie in (0, π/2)");
  }
}

}  // namespace

void Sector::validate() const {
  if (!(vertex >= 0.0) || !std::isfinite(vertex)) throw InvalidArgument("Sector: vertex must be >= 0");
  require_theta(semi_angle, "Sector");
}

bool Sector::contains(Complex lambda) const {
  const Complex d = lambda - vertex;
  if (d == Complex(0.0, 0.0)) return true;
  return std::abs(std::arg(d)) >= kPi - semi_angle - kBoundaryBand;
}

bool Sector::on_boundary(Complex lambda, double tol) const {
  const Complex d = lambda - vertex;
  if (d == Complex(0.0, 0.0)) return false;
  return std::abs(std::abs(std::arg(d)) - (kPi - semi_angle)) <= tol;
}

SectorTest check_numerical_range_in_sector(const OperatorSpec& spec, const Sector& sector,
                                           bool use_metric) {
  sector.validate();
  if (use_metric && !spec.metric) throw InvalidArgument("sector test: metric requested but absent");
  const CMatrix a = use_metric ? MetricContext::of(spec).to_orthonormal(shifted(spec, sector.vertex))
                               : shifted(spec, sector.vertex);
  const double half_width = kPi / 2.0 - sector.semi_angle;
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * half_width / kSectorAngleStep)));
  SectorTest out;
  out.margin = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    const double psi = -half_width + 2.0 * half_width * k / steps;
    const double value = max_eigenvalue(hermitian_part(std::polar(1.0, psi) * a));
    if (value > out.margin) {
      out.margin = value;
      out.worst_angle = psi;
    }
  }
  out.contained = out.margin <= Sector::kBoundaryBand * scale_of(spec.generator);
  return out;
}

std::vector<double> default_resolvent_angles(double theta) {
  std::vector<double> out;
  for (double w : {0.1, 0.5, 0.9}) out.push_back(theta + w * (kPi - theta));
  return out;
}

double dissipative_margin(const OperatorSpec& spec, double beta, bool use_metric) {
  if (!use_metric) return max_eigenvalue(hermitian_part(spec.generator)) - beta;
  if (!spec.metric) throw InvalidArgument("dissipative_margin: metric requested but absent");
  const CMatrix& m = *spec.metric;
  return max_generalized_eigenvalue(hermitian_part(m * spec.generator), m) - beta;
}

SectorialityReport check_sectorial(const OperatorSpec& spec, double beta, double theta,
                                   const std::vector<double>& phis, bool use_metric) {
  require_theta(theta, "check_sectorial");
  for (double phi : phis) {
    if (!(phi > theta && phi < kPi)) throw InvalidArgument("check_sectorial: each φ must lie in (θ, π)");
  }
  SectorialityReport out;
  out.theta = theta;
  out.beta = beta;
  out.holomorphy_semi_angle = kPi / 2.0 - theta;

  const SectorTest nr = check_numerical_range_in_sector(spec, Sector{beta, theta}, use_metric);
  out.nr_in_sector = nr.contained;
  out.nr_margin = nr.margin;

  const OperatorSpec centred{shifted(spec, beta), std::nullopt};
  const double scale = scale_of(centred.generator);
  const Sector origin{0.0, theta};
  out.spectrum_in_sector = true;
  for (const Complex& mu : spectrum(centred)) {
    if (std::abs(mu) <= Sector::kBoundaryBand * scale) continue;  // the vertex
    if (origin.on_boundary(mu, 1e-12)) out.spectrum_indeterminate = true;
    if (!origin.contains(mu)) out.spectrum_in_sector = false;
  }

  // Rays are scaled by ‖A − β‖; when that is negligible next to ‖A‖ (β found
  // by bisection at a vertex) they are scaled by ‖A‖ instead, which keeps the
  // samples clear of the eigenvalue-proximity margin.
  const double centred_norm = norm2(centred.generator);
  const double radius =
      centred_norm > 1e-6 * scale_of(spec.generator) ? centred_norm : scale_of(spec.generator);
  constexpr int kRadii = 61;
  for (double phi : phis) {
    ResolventSample sample;
    sample.phi = phi;
    const double edge = kPi - phi;
    for (double angle : {edge, -edge, 0.5 * edge, -0.5 * edge, 0.0}) {
      for (int r = 0; r < kRadii; ++r) {
        const double rho = radius * std::pow(10.0, -3.0 + 6.0 * r / (kRadii - 1));
        const Complex lambda = std::polar(rho, angle);
        double value;
        try {
          value = std::abs(lambda) * norm2(resolvent(centred, lambda));
        } catch (const SpectrumProximityError&) {
          value = std::numeric_limits<double>::infinity();
        }
        if (value > sample.sup_estimate) {
          sample.sup_estimate = value;
          sample.worst_lambda = lambda;
        }
      }
    }
    out.resolvent_sup.push_back(sample);
  }

  out.dissipative_margin = dissipative_margin(spec, beta, false);
  if (spec.metric) {
    out.metric_dissipative_margin = dissipative_margin(spec, beta, true);
    const MetricContext ctx = MetricContext::of(spec);
    out.metric_lower = ctx.lower_equivalence();
    out.metric_upper = ctx.upper_equivalence();
  }
  return out;
}

BetaSearch find_beta(const OperatorSpec& spec, double theta, bool use_metric) {
  require_theta(theta, "find_beta");
  auto margin = [&](double beta) {
    return check_numerical_range_in_sector(spec, Sector{beta, theta}, use_metric);
  };
  BetaSearch out;
  out.upper_limit = 10.0 * norm2(use_metric ? MetricContext::of(spec).to_orthonormal(spec.generator)
                                            : spec.generator);
  if (margin(0.0).contained) {
    out.feasible = true;
    out.beta = 0.0;
    return out;
  }
  const SectorTest top = margin(out.upper_limit);
  out.margin_at_limit = top.margin;
  if (!top.contained) return out;
  double lo = 0.0;
  double hi = out.upper_limit;
  while (hi - lo > kBetaTolerance) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid).contained ? hi : lo) = mid;
  }
  out.feasible = true;
  out.beta = hi;
  return out;
}

OperatorSpec generate_instance(Index dim, double theta, double beta, bool with_metric,
                               std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("generate_instance: dim must be >= 1");
  require_theta(theta, "generate_instance");
  if (!std::isfinite(beta)) throw InvalidArgument("generate_instance: beta must be finite");
  Rng rng = make_rng(seed);

  const CMatrix q = random_unitary(rng, dim);
  RVector d(dim);
  for (Index k = 0; k < dim; ++k) d[k] = uniform(rng, 0.5, 2.0);
  const CMatrix d_half = q * d.cwiseSqrt().cast<Complex>().asDiagonal() * q.adjoint();

  CMatrix w = random_hermitian(rng, dim);
  const double opening = std::tan(theta - std::min(0.05, theta / 4.0));
  const double w_norm = norm2(w);
  if (w_norm > 0.0) w *= opening / w_norm;

  const CMatrix id = CMatrix::Identity(dim, dim);
  const CMatrix b = -d_half * (id + Complex(0.0, 1.0) * w) * d_half;

  OperatorSpec out;
  if (!with_metric) {
    out.generator = beta * id + b;
    return out;
  }
  const CMatrix u = random_unitary(rng, dim);
  const CMatrix v = random_unitary(rng, dim);
  RVector sigma(dim);
  for (Index k = 0; k < dim; ++k) sigma[k] = uniform(rng, 0.5, 2.0);
  const CMatrix s = u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
  const CMatrix s_inv = v * sigma.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
  out.generator = beta * id + s * b * s_inv;
  out.metric = hermitian_part(u * sigma.array().square().inverse().matrix().cast<Complex>().asDiagonal() *
                              u.adjoint());
  return out;
}

double resolvent_contraction_ratio(const OperatorSpec& spec, int samples, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0x7265736f6cULL);
  const double scale = scale_of(spec.generator);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Complex lambda(uniform(rng, 0.01, 3.0) * scale, uniform(rng, -3.0, 3.0) * scale);
    worst = std::max(worst, norm2(resolvent(spec, lambda)) * lambda.real());
  }
  return worst;
}

double growth_ratio(const OperatorSpec& spec, double beta, const std::vector<double>& times,
                    bool use_metric) {
  const MetricContext ctx =
      use_metric ? MetricContext::of(spec) : MetricContext::plain(spec.dim());
  double worst = 0.0;
  for (double t : times) {
    worst = std::max(worst, ctx.op_norm(semigroup(spec, t)) / std::exp(beta * t));
  }
  return worst;
}

double holomorphic_contraction(const OperatorSpec& spec, double beta, double theta, int samples,
                               std::uint64_t seed, bool use_metric) {
  require_theta(theta, "holomorphic_contraction");
  const MetricContext ctx =
      use_metric ? MetricContext::of(spec) : MetricContext::plain(spec.dim());
  const CMatrix centred = shifted(spec, beta);
  const double opening = std::max(0.0, kPi / 2.0 - theta - 0.05);
  Rng rng = make_rng(seed, 0x686f6c6fULL);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Complex z = std::polar(uniform(rng, 0.0, 3.0), uniform(rng, -opening, opening));
    worst = std::max(worst, ctx.op_norm(expm(z * centred)));
  }
  return worst;
}

}  // namespace kreindil
