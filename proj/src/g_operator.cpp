#include "kreindil/g_operator.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "kreindil/random.hpp"

namespace kreindil {

CMatrix build_H(const OperatorSpec& spec, const MetricContext& ctx) {
  return spec.generator + ctx.adjoint(spec.generator);
}

CMatrix build_H_star(const OperatorSpec& spec, const MetricContext& ctx) {
  const CMatrix a_sharp = ctx.adjoint(spec.generator);
  return a_sharp + ctx.adjoint(a_sharp);
}

GDecomposition polar_parts(const CMatrix& H, double beta, const MetricContext& ctx) {
  require_square(H, "polar_parts");
  require_finite(H, "polar_parts");
  if (H.rows() != ctx.dim()) throw InvalidArgument("polar_parts: metric size mismatch");

  const HermitianEig eig = hermitian_eig(ctx.to_orthonormal(H));
  if (eig.asymmetry > 1e-10) {
    std::ostringstream os;
    os << "polar_parts: H is not selfadjoint in the active metric (asymmetry " << eig.asymmetry
       << ")";
    throw InvalidArgument(os.str());
  }
  const double top = eig.eigenvalues.size() ? eig.eigenvalues[0] : 0.0;
  const double scale = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (top > 2.0 * beta + 1e-10 * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "polar_parts: largest eigenvalue of G is " << top << " > 2β = " << 2.0 * beta;
    throw HypothesisError(os.str());
  }
  const double cutoff = kKernelCutoff * scale;
  auto chop = [cutoff](double x) { return std::abs(x) <= cutoff ? 0.0 : x; };

  auto lift = [&](auto fn) { return ctx.from_orthonormal(hermitian_function(eig, fn)); };
  GDecomposition out;
  out.beta = beta;
  out.spectrum = eig.eigenvalues;
  out.G = hermitian_part(ctx.to_orthonormal(H));
  out.G = ctx.from_orthonormal(out.G);
  out.J = lift([&](double x) {
    const double y = chop(x);
    return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
  });
  out.absG = lift([&](double x) { return std::abs(chop(x)); });
  out.Gplus = lift([&](double x) { return std::max(chop(x), 0.0); });
  out.Gminus = lift([&](double x) { return std::min(chop(x), 0.0); });
  out.C = lift([&](double x) { return std::sqrt(std::abs(chop(x))); });
  out.rank = 0;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (chop(eig.eigenvalues[k]) != 0.0) ++out.rank;
  }
  return out;
}

GDecomposition decompose(const OperatorSpec& spec, double beta, const MetricContext& ctx) {
  return polar_parts(build_H(spec, ctx), beta, ctx);
}

namespace {

using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1>;

struct EnergyResiduals {
  double coarse = 0.0;
  double fine = 0.0;
};

// Central differences of ‖e^{tX}h‖²_M against ⟨G e^{tX}h, e^{tX}h⟩_M.
EnergyResiduals energy_residuals(const CMatrix& x, const CMatrix& g, const CMatrix& m,
                                 const CVector& h, double t, double step) {
  const LMatrix xl = x.cast<std::complex<long double>>();
  const LMatrix ml = m.cast<std::complex<long double>>();
  const LMatrix gl = g.cast<std::complex<long double>>();
  const LVector hl = h.cast<std::complex<long double>>();
  auto energy = [&](long double s) {
    const LVector y = expm_extended(xl * s) * hl;
    return y.dot(ml * y).real();
  };
  const LVector y = expm_extended(xl * static_cast<long double>(t)) * hl;
  const long double target = y.dot(ml * gl * y).real();
  const double scale = std::max(1.0L, std::abs(target));
  auto residual = [&](long double d) {
    const long double estimate = (energy(t + d) - energy(t - d)) / (2.0L * d);
    return static_cast<double>(std::abs(estimate - target) / scale);
  };
  return {residual(step), residual(step / 2.0L)};
}

}  // namespace

EnergyDerivativeReport check_energy_derivative(const OperatorSpec& spec,
                                               const GDecomposition& decomp,
                                               const MetricContext& ctx, double t, int trials,
                                               std::uint64_t seed, double step) {
  if (!(t > 0.0)) throw InvalidArgument("check_energy_derivative: t must be > 0");
  if (!(step > 0.0) || t - step <= 0.0) {
    throw NumericsError("check_energy_derivative: step underflow or step >= t");
  }
  const CMatrix a_sharp = ctx.adjoint(spec.generator);
  const CMatrix g_star = a_sharp + ctx.adjoint(a_sharp);
  Rng rng = make_rng(seed, 0x656e6572ULL);
  EnergyDerivativeReport out;
  out.t = t;
  out.step = step;
  for (int k = 0; k < trials; ++k) {
    CVector h = random_complex_vector(rng, spec.dim());
    h /= std::sqrt(ctx.norm_sq(h));
    const EnergyResiduals fwd = energy_residuals(spec.generator, decomp.G, ctx.matrix(), h, t, step);
    const EnergyResiduals adj = energy_residuals(a_sharp, g_star, ctx.matrix(), h, t, step);
    out.residual = std::max(out.residual, fwd.coarse);
    out.residual_half = std::max(out.residual_half, fwd.fine);
    out.adjoint_residual = std::max(out.adjoint_residual, adj.coarse);
    out.adjoint_residual_half = std::max(out.adjoint_residual_half, adj.fine);
  }
  out.observed_order = richardson_order(out.residual, out.residual_half);
  out.adjoint_observed_order = richardson_order(out.adjoint_residual, out.adjoint_residual_half);
  out.exact = out.residual == 0.0 && out.residual_half == 0.0 && out.adjoint_residual == 0.0 &&
              out.adjoint_residual_half == 0.0;
  return out;
}

PolarLemmaReport check_polar_lemmas(const OperatorSpec& spec, const GDecomposition& decomp,
                                    const MetricContext& ctx, int trials, std::uint64_t seed,
                                    double slack) {
  PolarLemmaReport out;
  out.trials = trials;
  const CMatrix& g = decomp.G;
  const CMatrix& j = decomp.J;
  const CMatrix& mod = decomp.absG;
  const double beta = decomp.beta;

  auto rel = [](const CMatrix& x, const CMatrix& y) {
    return (x - y).norm() / std::max(1.0, y.norm());
  };
  out.structural_residual = std::max({rel(j * mod, g), rel(mod * j, g),
                                      rel(decomp.Gplus - decomp.Gminus, mod),
                                      rel(decomp.Gplus + decomp.Gminus, g),
                                      rel(decomp.C * decomp.C, mod)});

  const CMatrix h = build_H(spec, ctx);
  const CMatrix h_star = build_H_star(spec, ctx);
  out.h_star_gap = h.norm() > 0.0 ? (h_star - h).norm() / h.norm() : (h_star - h).norm();

  Rng rng = make_rng(seed, 0x706f6c72ULL);
  out.worst_modulus_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    CVector x = random_complex_vector(rng, spec.dim());
    x /= std::sqrt(ctx.norm_sq(x));
    auto norm = [&](const CVector& v) { return std::sqrt(std::max(ctx.norm_sq(v), 0.0)); };
    out.operator_residual = std::max({out.operator_residual, norm(g * (j * x) - mod * x),
                                      norm(mod * (j * x) - g * x), norm(j * (g * x) - mod * x)});
    const double gx = ctx.form(g, x);
    const double modx = ctx.form(mod, x);
    out.worst_modulus_slack = std::min(out.worst_modulus_slack, modx - std::abs(gx));
    if (std::abs(gx) > modx + slack) ++out.modulus_violations;
    if (ctx.form(decomp.Gminus, x) > slack) ++out.negative_violations;
    const double plus = ctx.form(decomp.Gplus, x);
    if (plus < -slack || plus > 2.0 * beta + slack) ++out.positive_violations;
    if (ctx.form(h, x) > 2.0 * beta + slack) ++out.h_violations;
    if (ctx.form(h_star, x) > 2.0 * beta + slack) ++out.h_star_violations;
  }
  if (trials == 0) out.worst_modulus_slack = 0.0;
  return out;
}

}  // namespace kreindil
