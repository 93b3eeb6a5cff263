#include "kreindil/krein_dilation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "kreindil/random.hpp"
#include "kreindil/sectoriality.hpp"

namespace kreindil {

// ---------------------------------------------------------------------------
// KreinSection

KreinSection KreinSection::build(const Semigroup& sg, double delta, int m, double cutoff) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("build_section: delta must be > 0");
  if (m < 0) throw InvalidArgument("build_section: m must be >= 0");
  const Index n = sg.dim();
  const int slots = 2 * m + 1;
  const CMatrix& metric = sg.metric().matrix();

  // One block per index difference k = c − r ∈ [−2m, 2m].
  std::vector<CMatrix> blocks(2 * slots - 1);
  for (int k = 0; k <= 2 * m; ++k) {
    const CMatrix forward = sg.forward(k * delta);
    blocks[2 * m + k] = metric * forward;
    blocks[2 * m - k] = metric * (k == 0 ? forward : sg.metric().adjoint(forward));
  }
  CMatrix gram(n * slots, n * slots);
  for (int r = 0; r < slots; ++r) {
    for (int c = 0; c < slots; ++c) gram.block(n * r, n * c, n, n) = blocks[2 * m + c - r];
  }
  return from_gram(std::move(gram), n, delta, m, cutoff);
}

KreinSection KreinSection::from_gram(CMatrix gram, Index dim, double delta, int m, double cutoff) {
  if (!(cutoff >= 0.0)) throw InvalidArgument("KreinSection: cutoff must be >= 0");
  if (gram.rows() != dim * (2 * m + 1) || gram.cols() != gram.rows()) {
    throw InvalidArgument("KreinSection: Gram size does not match n(2m+1)");
  }
  KreinSection out;
  out.gram_ = std::move(gram);
  out.n_ = dim;
  out.delta_ = delta;
  out.m_ = m;
  out.cutoff_ = cutoff;
  out.factor();
  return out;
}

void KreinSection::factor() {
  const HermitianEig eig = hermitian_eig(gram_);
  norm_ = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double threshold = cutoff_ * norm_;
  std::vector<Index> keep;
  signature_ = {};
  smallest_kept_ = std::numeric_limits<double>::infinity();
  largest_dropped_ = 0.0;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double lambda = eig.eigenvalues[k];
    if (std::abs(lambda) > threshold) {
      keep.push_back(k);
      (lambda > 0.0 ? signature_.positive : signature_.negative)++;
      smallest_kept_ = std::min(smallest_kept_, std::abs(lambda));
    } else {
      signature_.degenerate++;
      largest_dropped_ = std::max(largest_dropped_, std::abs(lambda));
    }
  }
  const Index kept = static_cast<Index>(keep.size());
  basis_.resize(gram_.rows(), kept);
  kept_.resize(kept);
  symmetry_.resize(kept);
  for (Index k = 0; k < kept; ++k) {
    basis_.col(k) = eig.eigenvectors.col(keep[k]);
    kept_[k] = eig.eigenvalues[keep[k]];
    symmetry_[k] = kept_[k] > 0.0 ? 1.0 : -1.0;
  }
  quotient_gram_ = basis_ * kept_.cast<Complex>().asDiagonal() * basis_.adjoint();
  if (kept == 0) smallest_kept_ = 0.0;
}

Index KreinSection::offset(int j) const {
  if (j < -m_ || j > m_) throw DomainError("KreinSection: slot outside the window");
  return n_ * (j + m_);
}

CMatrix KreinSection::embedding() const {
  CMatrix e = CMatrix::Zero(size(), n_);
  e.block(offset(0), 0, n_, n_).setIdentity();
  return e;
}

CVector KreinSection::embed(const CVector& h) const {
  if (h.size() != n_) throw InvalidArgument("KreinSection::embed: size mismatch");
  CVector c = CVector::Zero(size());
  c.segment(offset(0), n_) = h;
  return c;
}

Complex KreinSection::inner(const CVector& c, const CVector& d) const {
  return d.dot(quotient_gram_ * c);
}

KreinSection KreinSection::restricted(int m_prime) const {
  if (m_prime < 0 || m_prime > m_) throw InvalidArgument("KreinSection::restricted: bad half-width");
  const Index start = offset(-m_prime);
  const Index width = n_ * (2 * m_prime + 1);
  return from_gram(gram_.block(start, start, width, width), n_, delta_, m_prime, cutoff_);
}

// ---------------------------------------------------------------------------
// ShiftOperator

ShiftOperator::ShiftOperator(const KreinSection& section) : section_(section) {}

ShiftOperator::ShiftOperator(const KreinSection& section, CMatrix transform,
                             CMatrix inverse_transform)
    : section_(section),
      transform_(std::move(transform)),
      inverse_transform_(std::move(inverse_transform)) {
  if (transform_->rows() != section.size() || inverse_transform_->rows() != section.size()) {
    throw InvalidArgument("ShiftOperator: transform size mismatch");
  }
}

CVector ShiftOperator::translate(const CVector& c, int power) const {
  const Index n = section_.dim();
  const int m = section_.half_width();
  if (c.size() != section_.size()) throw InvalidArgument("ShiftOperator: vector size mismatch");
  if (power == 0) return c;
  CVector out = CVector::Zero(c.size());
  for (int j = -m; j <= m; ++j) {
    const auto block = c.segment(section_.offset(j), n);
    if ((block.array() == Complex(0.0, 0.0)).all()) continue;
    const int target = j + power;
    if (target < -m || target > m) {
      std::ostringstream os;
      os << "ShiftOperator: U^" << power << " moves slot " << j << " outside [-" << m << ", " << m
         << "]";
      throw DomainError(os.str());
    }
    out.segment(section_.offset(target), n) = block;
  }
  return out;
}

CVector ShiftOperator::apply(const CVector& c, int power) const {
  if (!transform_) return translate(c, power);
  return *inverse_transform_ * translate(*transform_ * c, power);
}

double ShiftOperator::isometry_defect(const CMatrix& gram) const {
  const Index n = section_.dim();
  if (section_.half_width() == 0) return 0.0;
  const Index domain = section_.size() - n;  // slots −m … m−1
  CMatrix u(section_.size(), domain);
  for (Index k = 0; k < domain; ++k) u.col(k) = apply(CVector::Unit(section_.size(), k), 1);
  const CMatrix moved = u.adjoint() * gram * u;
  const double scale = section_.norm() > 0.0 ? section_.norm() : 1.0;
  return (moved - gram.topLeftCorner(domain, domain)).cwiseAbs().maxCoeff() / scale;
}

double ShiftOperator::gram_isometry_defect() const { return isometry_defect(section_.gram()); }

double ShiftOperator::quotient_isometry_defect() const {
  return isometry_defect(section_.quotient_gram());
}

// ---------------------------------------------------------------------------
// Compression

namespace {

double condition_number(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(x);
  const auto& s = svd.singularValues();
  return s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : std::numeric_limits<double>::infinity();
}

}  // namespace

CMatrix compress_matrix(const KreinSection& section, const ShiftOperator& shift, int j,
                        double* condition) {
  const int m = section.half_width();
  if (j < -m || j > m) throw DomainError("compress: |j| exceeds the half-width");
  const Index n = section.dim();
  const CMatrix e = section.embedding();
  CMatrix moved(section.size(), n);
  for (Index k = 0; k < n; ++k) moved.col(k) = shift.apply(e.col(k), j);
  const CMatrix& fq = section.quotient_gram();
  const CMatrix rows = fq.block(section.offset(0), 0, n, section.size());  // E*F_q
  const CMatrix normal = rows.block(0, section.offset(0), n, n);         // E*F_qE
  if (condition) *condition = condition_number(normal);
  return normal.partialPivLu().solve(rows * moved);
}

CompressionResult compress(const KreinSection& section, const ShiftOperator& shift, int j,
                           const CVector& h) {
  if (h.size() != section.dim()) throw InvalidArgument("compress: vector size mismatch");
  CompressionResult out;
  out.value = compress_matrix(section, shift, j, &out.condition) * h;
  return out;
}

// ---------------------------------------------------------------------------
// Dilation reports

namespace {

using TargetFn = std::function<CMatrix(int)>;

double relative_error(const CMatrix& got, const CMatrix& want) {
  return norm2(got - want) / std::max(1.0, norm2(want));
}

void check_regularity(const KreinSection& section, const CMatrix& inner_on_h,
                      DilationReport& report) {
  const Index n = section.dim();
  const CMatrix normal =
      section.quotient_gram().block(section.offset(0), section.offset(0), n, n);
  const HermitianEig eig = hermitian_eig(normal);
  const double smallest = eig.eigenvalues.cwiseAbs().minCoeff();
  if (!(smallest > section.cutoff() * section.norm())) {
    std::ostringstream os;
    os << "ι(𝔥) is degenerate in the quotient: eigenvalues of E*F_qE are";
    for (Index k = 0; k < eig.eigenvalues.size(); ++k) os << ' ' << eig.eigenvalues[k];
    throw RegularityError(os.str());
  }
  report.regularity_defect = (normal - inner_on_h).norm() / std::max(1.0, inner_on_h.norm());
  report.embedding_positive = eig.eigenvalues[eig.eigenvalues.size() - 1] > 0.0;
  report.embedding_condition = condition_number(normal);
}

double max_compression_error(const KreinSection& section, const ShiftOperator& shift,
                             const TargetFn& target) {
  double worst = 0.0;
  const int m = section.half_width();
  for (int j = -m; j <= m; ++j) {
    worst = std::max(worst, relative_error(compress_matrix(section, shift, j), target(j)));
  }
  return worst;
}

void fill_common(const KreinSection& section, const ShiftOperator& shift, const TargetFn& target,
                 const TargetFn* transported, DilationReport& report) {
  report.delta = section.delta();
  report.m = section.half_width();
  report.signature = section.signature();
  report.smallest_kept = section.smallest_kept();
  report.largest_dropped = section.largest_dropped();
  report.gram_isometry_defect = shift.gram_isometry_defect();
  report.quotient_isometry_defect = shift.quotient_isometry_defect();
  const int m = section.half_width();
  for (int j = -m; j <= m; ++j) {
    const CMatrix got = compress_matrix(section, shift, j);
    CompressionSample sample;
    sample.j = j;
    sample.error = relative_error(got, target(j));
    report.max_compression_error = std::max(report.max_compression_error, sample.error);
    if (transported) {
      sample.transported_error = relative_error(got, (*transported)(j));
      report.max_transported_error =
          std::max(report.max_transported_error.value_or(0.0), *sample.transported_error);
    }
    report.compression.push_back(sample);
  }

  const Signature& sig = section.signature();
  if (sig.negative == 0 && sig.degenerate == 0) {
    // Hilbert-space realization F = LL*, coordinates c ↦ L*c.
    const Eigen::LLT<CMatrix> llt(hermitian_part(section.gram()));
    if (llt.info() == Eigen::Success) {
      const CMatrix lower = llt.matrixL();
      const CMatrix upper = lower.adjoint();
      report.cholesky_residual =
          (lower * upper - section.gram()).norm() / std::max(1.0, section.gram().norm());
      const Index n = section.dim();
      const CMatrix phi = upper * section.embedding();
      const CMatrix normal = phi.adjoint() * phi;
      double gap = 0.0;
      for (int j = -m; j <= m; ++j) {
        CMatrix moved(section.size(), n);
        const CMatrix e = section.embedding();
        for (Index k = 0; k < n; ++k) moved.col(k) = shift.apply(e.col(k), j);
        const CMatrix hilbert = normal.partialPivLu().solve(phi.adjoint() * (upper * moved));
        gap = std::max(gap, relative_error(hilbert, compress_matrix(section, shift, j)));
      }
      report.cholesky_compression_gap = gap;
    }
  }
}

double gram_consistency(const KreinSection& section, const Semigroup& sg) {
  const Index n = section.dim();
  const int m = section.half_width();
  const int slots = 2 * m + 1;
  const CMatrix& fq = section.quotient_gram();
  const CMatrix& metric = sg.metric().matrix();
  std::vector<CMatrix> expected(2 * slots - 1);
  for (int k = -2 * m; k <= 2 * m; ++k) expected[k + 2 * m] = metric * sg.hermitian(k * section.delta());
  double worst = 0.0;
  for (int r = 0; r < slots; ++r) {
    for (int c = 0; c < slots; ++c) {
      worst = std::max(worst, (fq.block(n * r, n * c, n, n) - expected[c - r + 2 * m]).norm());
    }
  }
  return worst / std::max(section.norm(), 1e-300);
}

}  // namespace

DilationReport dilate(const Semigroup& sg, double delta, int m, double cutoff) {
  const KreinSection section = KreinSection::build(sg, delta, m, cutoff);
  const ShiftOperator shift(section);
  DilationReport report;
  report.metric_path = false;
  check_regularity(section, sg.metric().matrix(), report);
  const TargetFn target = [&](int j) { return sg.hermitian(j * delta); };
  fill_common(section, shift, target, nullptr, report);
  report.gram_consistency = gram_consistency(section, sg);
  for (int mp = 0; mp <= m; ++mp) {
    const KreinSection sub = section.restricted(mp);
    const ShiftOperator sub_shift(sub);
    report.signature_trace.push_back(
        {mp, sub.signature(), max_compression_error(sub, sub_shift, target)});
  }
  return report;
}

MetricTransform metric_transform(const KreinSection& base, const MetricContext& ctx) {
  const Index n = base.dim();
  const Index size = base.size();
  if (ctx.dim() != n) throw InvalidArgument("metric_transform: metric size mismatch");
  const CMatrix e = base.embedding();
  // P = M₀⁻¹E*F₀ is the coordinate of the ⟨·,·⟩₀-orthogonal projection onto ι(𝔥).
  const CMatrix p = ctx.inverse() * base.gram().block(base.offset(0), 0, n, size);
  const CMatrix id_n = CMatrix::Identity(n, n);
  const CMatrix id = CMatrix::Identity(size, size);

  MetricTransform out;
  out.lambda_half = ctx.inv_sqrt();  // Λ^{1/2} with Λ = M₀⁻¹
  out.transform = id + e * (out.lambda_half - id_n) * p;
  out.inverse = id + e * (ctx.sqrt() - id_n) * p;
  // ⟨Lc, Ld⟩₀ = d*F₀c + (Pd)*(I − M₀)(Pc).
  out.gram = base.gram() + p.adjoint() * (id_n - ctx.matrix()) * p;
  return out;
}

DilationReport dilate_with_metric(const OperatorSpec& spec, double delta, int m, double cutoff,
                                  std::optional<double> beta) {
  if (!spec.metric) throw InvalidArgument("dilate_with_metric: the model has no metric");
  if (beta) {
    const double margin = dissipative_margin(spec, *beta, true);
    if (margin > 1e-10 * std::max(1.0, norm2(spec.generator))) {
      std::ostringstream os;
      os << "dilate_with_metric: Re⟨Ax,x⟩₀ − β‖x‖₀² reaches " << margin << " > 0";
      throw HypothesisError(os.str());
    }
  }
  const Semigroup sg0(spec);  // the ⟨·,·⟩₀ geometry
  const MetricContext& ctx = sg0.metric();
  const Index n = spec.dim();
  const CMatrix id_n = CMatrix::Identity(n, n);

  const TargetFn plain_target = [&](int j) -> CMatrix {
    const CMatrix t = sg0.forward(std::abs(j) * delta);
    return j >= 0 ? t : CMatrix(t.adjoint());
  };
  const TargetFn transported = [&](int j) -> CMatrix {
    return ctx.sqrt() * sg0.hermitian(j * delta) * ctx.inv_sqrt();
  };

  auto transformed = [&](const KreinSection& base) {
    MetricTransform mt = metric_transform(base, ctx);
    KreinSection section =
        KreinSection::from_gram(std::move(mt.gram), n, delta, base.half_width(), cutoff);
    ShiftOperator shift(section, std::move(mt.transform), std::move(mt.inverse));
    return std::pair{std::move(section), std::move(shift)};
  };

  const KreinSection base = KreinSection::build(sg0, delta, m, cutoff);
  auto [section, shift] = transformed(base);

  DilationReport report;
  report.metric_path = true;
  check_regularity(section, id_n, report);
  fill_common(section, shift, plain_target, &transported, report);
  report.gram_consistency = gram_consistency(base, sg0);
  for (int mp = 0; mp <= m; ++mp) {
    auto [sub, sub_shift] = transformed(base.restricted(mp));
    report.signature_trace.push_back(
        {mp, sub.signature(), max_compression_error(sub, sub_shift, plain_target)});
  }

  report.metric_lower = ctx.lower_equivalence();
  report.metric_upper = ctx.upper_equivalence();
  const double d2 = *report.metric_lower * *report.metric_lower;
  const double big_d2 = *report.metric_upper * *report.metric_upper;
  Rng rng = make_rng(0x73616e64ULL);
  double violation = 0.0;
  for (int k = 0; k < 64; ++k) {
    const CVector h = random_complex_vector(rng, n);
    const double plain = h.squaredNorm();
    const double zero_norm = ctx.norm_sq(h);
    violation = std::max({violation, (d2 * zero_norm - plain) / plain,
                          (plain - big_d2 * zero_norm) / plain});
  }
  report.sandwich_violation = std::max(violation, 0.0);
  return report;
}

}  // namespace kreindil
