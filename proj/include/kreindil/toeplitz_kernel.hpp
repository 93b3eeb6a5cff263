#pragma once

#include <vector>

#include "kreindil/g_operator.hpp"
#include "kreindil/metric.hpp"
#include "kreindil/operator_core.hpp"

namespace kreindil {

/// T(t) = e^{tA} together with the active metric, which fixes T(t)♯ and the
/// Hermitian extension f(s) = T(s) for s ≥ 0, T(−s)♯ for s < 0.
class Semigroup {
 public:
  explicit Semigroup(OperatorSpec spec);
  Semigroup(OperatorSpec spec, MetricContext ctx);

  const OperatorSpec& spec() const { return spec_; }
  const MetricContext& metric() const { return ctx_; }
  Index dim() const { return spec_.dim(); }

  CMatrix forward(double t) const;
  CMatrix adjoint(double t) const;
  CMatrix hermitian(double s) const;

  /// The semigroup generated by A♯ in the same metric.
  Semigroup reflected() const;

 private:
  OperatorSpec spec_;
  MetricContext ctx_;
};

/// f(s).
inline CMatrix f_value(const Semigroup& sg, double s) { return sg.hermitian(s); }

/// A function h: ℝ → ℂⁿ with finite support. Points are strictly
/// increasing and always contain 0 (possibly with a zero vector).
struct FiniteSupportFunction {
  std::vector<double> points;
  std::vector<CVector> vectors;

  /// Sorts, merges points closer than kMergeDistance (adding vectors), snaps
  /// near-zero points to 0 and inserts 0 if absent.
  static FiniteSupportFunction make(std::vector<double> points, std::vector<CVector> vectors);

  static constexpr double kMergeDistance = 1e-12;

  std::size_t size() const { return points.size(); }
  Index dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
  std::size_t zero_index() const;
  /// Number of strictly negative points.
  std::size_t negative_count() const { return zero_index(); }

  /// s ↦ h(s − ξ): support moved by +ξ.
  FiniteSupportFunction shifted(double xi) const;
  /// s ↦ h(−s).
  FiniteSupportFunction reflected() const;
  /// Vectors concatenated in point order.
  CVector stacked() const;
  /// Same points, vectors taken from a stacked vector.
  FiniteSupportFunction with_stacked(const CVector& c) const;
};

struct VTransform {
  std::vector<double> points;
  std::vector<CVector> values;
  double seam_mismatch = 0.0;  // relative gap between the two expressions for v(0)
};

/// z on the negative points, y on the positive ones and the common value at 0.
/// Throws ConsistencyError when the two expressions for v(0) disagree.
VTransform v_transform(const Semigroup& sg, const FiniteSupportFunction& h);

/// Inverse of v_transform on the support points.
FiniteSupportFunction h_from_v(const Semigroup& sg, const VTransform& v);

struct KernelEntry {
  double s = 0.0;
  double t = 0.0;
  CMatrix value;
  double quadrature_error = 0.0;
};

/// The majorant kernel k(s, t). Mixed-sign arguments need no quadrature.
KernelEntry kernel_value(const Semigroup& sg, const GDecomposition& decomp, double s, double t,
                         const QuadratureSpec& quad = {});

/// Block Gram matrices over a point list; block (r, c) pairs point c with
/// point r, premultiplied by the metric, so Σ⟨X(s,t)h(s), g(t)⟩ = g*·Gram·h.
struct BlockGram {
  CMatrix matrix;
  double quadrature_error = 0.0;
};
BlockGram f_gram(const Semigroup& sg, const std::vector<double>& points);
BlockGram k_gram(const Semigroup& sg, const GDecomposition& decomp,
                 const std::vector<double>& points, const QuadratureSpec& quad = {});

/// A quadratic form evaluated as a double sum and through the v-integrals.
struct FormEvaluation {
  double value = 0.0;       // double sum
  double imaginary = 0.0;   // leftover imaginary part of the double sum
  double integral_route = 0.0;
  double quadrature_error = 0.0;
  double magnitude = 0.0;   // Σ|⟨X(s,t)h(s), h(t)⟩|, the scale for relative checks
  bool routes_agree = true;

  double relative_gap() const;
};

/// Σ⟨f(s−t)h(s), h(t)⟩; integral route Σ∫⟨(−G)v, v⟩ + ‖v(0)‖².
FormEvaluation s_f(const Semigroup& sg, const GDecomposition& decomp,
                   const FiniteSupportFunction& h, const QuadratureSpec& quad = {});
/// Σ⟨k(s,t)h(s), h(t)⟩; integral route Σ∫⟨|G|v, v⟩ + ‖v(0)‖².
FormEvaluation s_k(const Semigroup& sg, const GDecomposition& decomp,
                   const FiniteSupportFunction& h, const QuadratureSpec& quad = {});

/// Σ⟨f(s−t)h(s), g(t)⟩ for h, g on the same points.
Complex f_cross_form(const Semigroup& sg, const FiniteSupportFunction& h,
                     const FiniteSupportFunction& g);

/// The function whose v-transform is −Jv away from 0 and v(0) at 0.
/// Throws PreconditionError unless S_k(h) > 0.
FiniteSupportFunction h_prime(const Semigroup& sg, const GDecomposition& decomp,
                              const FiniteSupportFunction& h, const QuadratureSpec& quad = {});

struct ConditionIIIReport {
  Complex cross{};       // Σ⟨f(s−t)h(s), h′(t)⟩
  double sk = 0.0;       // S_k(h)
  double sk_prime = 0.0; // S_k(h′)
  double ratio = 0.0;    // |cross| / sqrt(S_k(h) S_k(h′))
  double cross_deviation = 0.0;  // |cross − S_k(h)| / S_k(h)
  double prime_deviation = 0.0;  // |S_k(h′) − S_k(h)| / S_k(h)
  double best_ratio = 0.0;  // sup over g on the same points of |Σ⟨f h, g⟩|/sqrt(S_k(h)S_k(g))
  bool passed = false;
};

inline constexpr double kIdentityTolerance = 1e-6;

ConditionIIIReport check_condition_iii(const Semigroup& sg, const GDecomposition& decomp,
                                       const FiniteSupportFunction& h,
                                       const QuadratureSpec& quad = {},
                                       double tolerance = kIdentityTolerance);

struct MajorizationReport {
  double sf = 0.0;
  double sk = 0.0;
  double slack = 0.0;  // S_k − |S_f|
  double scale = 0.0;
  bool passed = false;
};

inline constexpr double kInequalitySlack = 1e-9;

MajorizationReport check_majorization(const Semigroup& sg, const GDecomposition& decomp,
                                      const FiniteSupportFunction& h,
                                      const QuadratureSpec& quad = {});

struct TranslationReport {
  double xi = 0.0;
  double s0 = 0.0;       // S(h, 0)
  double s_xi = 0.0;     // S(h, ξ) = S_k(h_ξ)
  double rho = 1.0;      // e^{8β|ξ|}
  double ratio = 0.0;    // S(h, ξ)/S(h, 0)
  double observed_exponent = 0.0;  // log(ratio)/|ξ|
  bool passed = false;
};

TranslationReport check_translation_bound(const Semigroup& sg, const GDecomposition& decomp,
                                          const FiniteSupportFunction& h, double xi, double beta,
                                          const QuadratureSpec& quad = {});

/// S(h, ξ) by the explicit decomposition across the first negative point,
/// reducing by translation when that point lies in (−ξ, 0) and by reflection
/// (A → A♯) for ξ < 0. A cross-check for the translated form.
double translation_by_cases(const Semigroup& sg, const GDecomposition& decomp,
                            const FiniteSupportFunction& h, double xi,
                            const QuadratureSpec& quad = {});

}  // namespace kreindil
