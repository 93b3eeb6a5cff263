#pragma once

#include <optional>
#include <vector>

#include "kreindil/toeplitz_kernel.hpp"

namespace kreindil {

struct Signature {
  Index positive = 0;
  Index negative = 0;
  Index degenerate = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

inline constexpr double kDegeneracyCutoff = 1e-10;

/// Finite section of the Kreĭn space spanned by the kernel vectors δ_{jδ}⊗x,
/// j = −m…m. Coordinates are coefficient vectors c ∈ ℂ^{n(2m+1)} (slot-major)
/// with ⟨c, d⟩_K = d*·F·c. Directions with |eigenvalue| ≤ cutoff·‖F‖ are
/// quotiented out.
class KreinSection {
 public:
  /// Gram blocks F(r, c) = M·f((c − r)δ), so F is exactly block-Toeplitz.
  static KreinSection build(const Semigroup& sg, double delta, int m,
                            double cutoff = kDegeneracyCutoff);

  /// A section with a given Gram and embedding; used by the metric transform.
  static KreinSection from_gram(CMatrix gram, Index dim, double delta, int m, double cutoff);

  double delta() const { return delta_; }
  int half_width() const { return m_; }
  Index dim() const { return n_; }
  Index size() const { return gram_.rows(); }
  double cutoff() const { return cutoff_; }
  /// ‖F‖₂.
  double norm() const { return norm_; }

  const CMatrix& gram() const { return gram_; }
  /// V_k Λ_k V_k*: the Gram with degenerate directions removed.
  const CMatrix& quotient_gram() const { return quotient_gram_; }
  /// V_k: columns spanning the non-degenerate part.
  const CMatrix& basis() const { return basis_; }
  const RVector& kept_eigenvalues() const { return kept_; }
  /// sign(Λ_k), the fundamental symmetry in quotient coordinates V_k*c.
  const RVector& fundamental_symmetry() const { return symmetry_; }
  const Signature& signature() const { return signature_; }
  /// smallest kept |λ| and largest dropped |λ| (0 if none dropped).
  double smallest_kept() const { return smallest_kept_; }
  double largest_dropped() const { return largest_dropped_; }

  /// Row offset of slot j ∈ [−m, m].
  Index offset(int j) const;
  /// E: ℂⁿ → section, h ↦ δ₀⊗h.
  CMatrix embedding() const;
  CVector embed(const CVector& h) const;

  /// ⟨c, d⟩ in the quotient.
  Complex inner(const CVector& c, const CVector& d) const;

  /// The section of half-width m' ≤ m sharing the centre (principal submatrix).
  KreinSection restricted(int m_prime) const;

 private:
  void factor();

  CMatrix gram_;
  CMatrix quotient_gram_;
  CMatrix basis_;
  RVector kept_;
  RVector symmetry_;
  Signature signature_;
  double smallest_kept_ = 0.0;
  double largest_dropped_ = 0.0;
  double norm_ = 0.0;
  double delta_ = 0.0;
  double cutoff_ = kDegeneracyCutoff;
  Index n_ = 0;
  int m_ = 0;
};

/// The translation δ_{jδ}⊗x ↦ δ_{(j+1)δ}⊗x, optionally conjugated by an
/// invertible change of coordinates (U = L⁻¹SL). Powers are defined while
/// supports stay in the window.
class ShiftOperator {
 public:
  explicit ShiftOperator(const KreinSection& section);
  ShiftOperator(const KreinSection& section, CMatrix transform, CMatrix inverse_transform);

  /// U^power c for power ∈ ℤ. Throws DomainError if the support leaves the window.
  CVector apply(const CVector& c, int power) const;

  /// max |⟨Uv, Uw⟩ − ⟨v, w⟩| / ‖F‖ over the domain (Gram level and quotient level).
  double gram_isometry_defect() const;
  double quotient_isometry_defect() const;

 private:
  CVector translate(const CVector& c, int power) const;
  double isometry_defect(const CMatrix& gram) const;

  KreinSection section_;
  std::optional<CMatrix> transform_;
  std::optional<CMatrix> inverse_transform_;
};

struct CompressionResult {
  CVector value;
  double condition = 0.0;  // of E*F_qE
};

/// P_𝔥 U(jδ) ι(h), solved from the quotient Gram system.
CompressionResult compress(const KreinSection& section, const ShiftOperator& shift, int j,
                           const CVector& h);

/// The n×n matrix of h ↦ P_𝔥 U(jδ) ι(h).
CMatrix compress_matrix(const KreinSection& section, const ShiftOperator& shift, int j,
                        double* condition = nullptr);

struct CompressionSample {
  int j = 0;
  double error = 0.0;             // vs T(jδ) (j ≥ 0) or T(|j|δ)^adj (j < 0)
  std::optional<double> transported_error;  // metric path: vs Λ^{-1/2}T Λ^{1/2}
};

struct SignatureRow {
  int m = 0;
  Signature signature;
  double max_compression_error = 0.0;
};

struct DilationReport {
  double delta = 0.0;
  int m = 0;
  bool metric_path = false;
  Signature signature;
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
  std::vector<CompressionSample> compression;
  double max_compression_error = 0.0;
  std::optional<double> max_transported_error;
  double gram_isometry_defect = 0.0;
  double quotient_isometry_defect = 0.0;
  double regularity_defect = 0.0;    // ‖E*F_qE − ⟨·,·⟩ on 𝔥‖ relative
  double gram_consistency = 0.0;     // max block ‖F_q(r,c) − M f((c−r)δ)‖ / ‖F‖
  double embedding_condition = 0.0;
  bool embedding_positive = false;   // ι(𝔥) positive definite in the quotient
  std::vector<SignatureRow> signature_trace;
  // Hilbert-space cross-check when the Gram is positive definite.
  std::optional<double> cholesky_residual;
  std::optional<double> cholesky_compression_gap;
  // Metric path only.
  std::optional<double> metric_lower;
  std::optional<double> metric_upper;
  std::optional<double> sandwich_violation;  // max relative breach of d²‖h‖₀² ≤ ‖h‖² ≤ D²‖h‖₀²
};

/// Section, shift and compressions in the active geometry of the semigroup.
/// Throws RegularityError if ι(𝔥) is degenerate in the quotient.
DilationReport dilate(const Semigroup& sg, double delta, int m,
                      double cutoff = kDegeneracyCutoff);

/// Builds the section in the ⟨·,·⟩₀ geometry, transforms it by
/// L = Λ^{1/2} on ι(𝔥) and the identity on its complement (Λ = M₀⁻¹) and
/// re-verifies compression against T(t) in the plain product. When beta is
/// given, refuses (HypothesisError) unless Re⟨Ax, x⟩₀ ≤ β‖x‖₀².
DilationReport dilate_with_metric(const OperatorSpec& spec, double delta, int m,
                                  double cutoff = kDegeneracyCutoff,
                                  std::optional<double> beta = std::nullopt);

/// The transformed section's Gram and coordinate maps, for inspection.
struct MetricTransform {
  CMatrix gram;       // L*F₀L
  CMatrix transform;  // L
  CMatrix inverse;    // L⁻¹
  CMatrix lambda_half;  // Λ^{1/2}
};
MetricTransform metric_transform(const KreinSection& base, const MetricContext& ctx);

}  // namespace kreindil
