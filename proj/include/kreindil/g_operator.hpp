#pragma once

#include <cstdint>

#include "kreindil/metric.hpp"
#include "kreindil/operator_core.hpp"

namespace kreindil {

/// H = A + A♯: the form ⟨Ax, y⟩ + ⟨x, Ay⟩ as an operator.
CMatrix build_H(const OperatorSpec& spec, const MetricContext& ctx);

/// The same construction applied to A♯. Equal to H in finite dimension.
CMatrix build_H_star(const OperatorSpec& spec, const MetricContext& ctx);

/// G = H with its sign J (zero on ker G), modulus |G|, positive and
/// negative parts and C = |G|^{1/2}, all selfadjoint in the active metric.
struct GDecomposition {
  CMatrix G;
  CMatrix J;
  CMatrix absG;
  CMatrix Gplus;
  CMatrix Gminus;
  CMatrix C;
  double beta = 0.0;
  RVector spectrum;  // eigenvalues of G, descending
  Index rank = 0;
};

/// Eigenvalues with |λ| ≤ this fraction of ‖G‖ count as kernel.
inline constexpr double kKernelCutoff = 1e-12;

/// Throws HypothesisError when λmax(G) > 2β (beyond 1e-10 relative slack).
GDecomposition polar_parts(const CMatrix& H, double beta, const MetricContext& ctx);

/// Convenience: polar_parts(build_H(spec, ctx), beta, ctx).
GDecomposition decompose(const OperatorSpec& spec, double beta, const MetricContext& ctx);

/// Finite-difference check of d/dt‖T(t)h‖² = ⟨GT(t)h, T(t)h⟩ and of the
/// adjoint version with T(t)♯ and G_*.
struct EnergyDerivativeReport {
  double t = 0.0;
  double step = 0.0;
  double residual = 0.0;
  double residual_half = 0.0;
  double observed_order = 0.0;
  double adjoint_residual = 0.0;
  double adjoint_residual_half = 0.0;
  double adjoint_observed_order = 0.0;
  bool exact = false;
};

EnergyDerivativeReport check_energy_derivative(const OperatorSpec& spec,
                                               const GDecomposition& decomp,
                                               const MetricContext& ctx, double t, int trials,
                                               std::uint64_t seed,
                                               double step = kDefaultDifferenceStep);

/// Sampled polar-part identities and form inequalities. Residuals are
/// absolute on unit vectors of the active metric; violations are counted
/// beyond `slack`.
struct PolarLemmaReport {
  double operator_residual = 0.0;  // max of ‖GJx − |G|x‖, ‖|G|Jx − Gx‖, ‖JGx − |G|x‖
  double structural_residual = 0.0;  // G = J|G| = |G|J, G⁺ − G⁻ = |G|, G⁺ + G⁻ = G, C² = |G|
  int modulus_violations = 0;   // |⟨Gx,x⟩| > ⟨|G|x,x⟩
  int negative_violations = 0;  // ⟨G⁻x,x⟩ > 0
  int positive_violations = 0;  // ⟨G⁺x,x⟩ outside [0, 2β]
  int h_violations = 0;         // ⟨Hx,x⟩ > 2β
  int h_star_violations = 0;    // ⟨H_*u,u⟩ > 2β
  double h_star_gap = 0.0;      // ‖H_* − H‖_F/‖H‖_F
  double worst_modulus_slack = 0.0;
  int trials = 0;
};

PolarLemmaReport check_polar_lemmas(const OperatorSpec& spec, const GDecomposition& decomp,
                                    const MetricContext& ctx, int trials, std::uint64_t seed,
                                    double slack = 1e-10);

}  // namespace kreindil
