#include "kreindil/toeplitz_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace kreindil {

// ---------------------------------------------------------------------------
// Semigroup

Semigroup::Semigroup(OperatorSpec spec) : Semigroup(spec, MetricContext::of(spec)) {}

Semigroup::Semigroup(OperatorSpec spec, MetricContext ctx)
    : spec_(std::move(spec)), ctx_(std::move(ctx)) {
  spec_.validate();
  if (ctx_.dim() != spec_.dim()) throw InvalidArgument("Semigroup: metric size mismatch");
}

CMatrix Semigroup::forward(double t) const { return expm(t * spec_.generator); }

CMatrix Semigroup::adjoint(double t) const { return ctx_.adjoint(forward(t)); }

CMatrix Semigroup::hermitian(double s) const { return s >= 0.0 ? forward(s) : adjoint(-s); }

Semigroup Semigroup::reflected() const {
  OperatorSpec mirrored = spec_;
  mirrored.generator = ctx_.adjoint(spec_.generator);
  return Semigroup(std::move(mirrored), ctx_);
}

// ---------------------------------------------------------------------------
// FiniteSupportFunction

FiniteSupportFunction FiniteSupportFunction::make(std::vector<double> points,
                                                  std::vector<CVector> vectors) {
  if (points.size() != vectors.size()) {
    throw InvalidArgument("FiniteSupportFunction: points and vectors differ in length");
  }
  if (points.empty()) throw InvalidArgument("FiniteSupportFunction: need a dimension; pass 0");
  const Index n = vectors.front().size();
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(points[k])) throw InvalidArgument("FiniteSupportFunction: non-finite point");
    if (vectors[k].size() != n) throw InvalidArgument("FiniteSupportFunction: mixed vector sizes");
    if (std::abs(points[k]) <= kMergeDistance) points[k] = 0.0;
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  FiniteSupportFunction out;
  for (std::size_t k : order) {
    if (!out.points.empty() && points[k] - out.points.back() <= kMergeDistance) {
      out.vectors.back() += vectors[k];
      if (points[k] == 0.0) out.points.back() = 0.0;
      continue;
    }
    out.points.push_back(points[k]);
    out.vectors.push_back(vectors[k]);
  }
  const auto zero = std::lower_bound(out.points.begin(), out.points.end(), 0.0);
  if (zero == out.points.end() || *zero != 0.0) {
    const auto at = zero - out.points.begin();
    out.points.insert(zero, 0.0);
    out.vectors.insert(out.vectors.begin() + at, CVector::Zero(n));
  }
  return out;
}

std::size_t FiniteSupportFunction::zero_index() const {
  const auto it = std::lower_bound(points.begin(), points.end(), 0.0);
  if (it == points.end() || *it != 0.0) {
    throw ConsistencyError("FiniteSupportFunction: 0 missing from the support");
  }
  return static_cast<std::size_t>(it - points.begin());
}

FiniteSupportFunction FiniteSupportFunction::shifted(double xi) const {
  std::vector<double> moved = points;
  for (double& p : moved) p += xi;
  return make(std::move(moved), vectors);
}

FiniteSupportFunction FiniteSupportFunction::reflected() const {
  std::vector<double> mirrored = points;
  for (double& p : mirrored) p = -p;
  return make(std::move(mirrored), vectors);
}

CVector FiniteSupportFunction::stacked() const {
  const Index n = dim();
  CVector out(n * static_cast<Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) out.segment(n * k, n) = vectors[k];
  return out;
}

FiniteSupportFunction FiniteSupportFunction::with_stacked(const CVector& c) const {
  const Index n = dim();
  if (c.size() != n * static_cast<Index>(size())) {
    throw InvalidArgument("FiniteSupportFunction::with_stacked: size mismatch");
  }
  FiniteSupportFunction out = *this;
  for (std::size_t k = 0; k < size(); ++k) out.vectors[k] = c.segment(n * k, n);
  return out;
}

// ---------------------------------------------------------------------------
// v-transform

namespace {

void require_dim(const Semigroup& sg, const FiniteSupportFunction& h) {
  if (h.dim() != sg.dim()) throw InvalidArgument("function values do not match the operator size");
}

}  // namespace

VTransform v_transform(const Semigroup& sg, const FiniteSupportFunction& h) {
  require_dim(sg, h);
  const std::size_t zero = h.zero_index();
  const std::size_t count = h.size();
  const auto& p = h.points;
  VTransform out;
  out.points = p;
  out.values.resize(count);

  for (std::size_t i = 0; i < zero; ++i) {
    out.values[i] = h.vectors[i];
    if (i > 0) out.values[i] += sg.adjoint(p[i] - p[i - 1]) * out.values[i - 1];
  }
  for (std::size_t i = count - 1; i > zero; --i) {
    out.values[i] = h.vectors[i];
    if (i + 1 < count) out.values[i] += sg.forward(p[i + 1] - p[i]) * out.values[i + 1];
  }

  // v(0) two ways: z(0) by direct sum plus the y-recursion, and y(0) by
  // direct sum plus the z-recursion.
  CVector z0 = CVector::Zero(h.dim());
  CVector y0 = CVector::Zero(h.dim());
  for (std::size_t i = 0; i <= zero; ++i) z0 += sg.adjoint(-p[i]) * h.vectors[i];
  for (std::size_t i = zero; i < count; ++i) y0 += sg.forward(p[i]) * h.vectors[i];
  CVector left = z0;
  CVector right = y0;
  if (zero + 1 < count) left += sg.forward(p[zero + 1]) * out.values[zero + 1];
  if (zero > 0) right += sg.adjoint(-p[zero - 1]) * out.values[zero - 1];
  out.values[zero] = left;
  out.seam_mismatch = (left - right).norm() / std::max({1.0, left.norm(), right.norm()});
  if (out.seam_mismatch > 1e-10) {
    std::ostringstream os;
    os << "v_transform: the two expressions for v(0) differ by " << out.seam_mismatch;
    throw ConsistencyError(os.str());
  }
  return out;
}

FiniteSupportFunction h_from_v(const Semigroup& sg, const VTransform& v) {
  FiniteSupportFunction shape;
  shape.points = v.points;
  shape.vectors = v.values;
  const std::size_t zero = shape.zero_index();
  const std::size_t count = v.points.size();
  const auto& p = v.points;
  FiniteSupportFunction out = shape;
  for (std::size_t i = 0; i < count; ++i) {
    CVector value = v.values[i];
    if (i <= zero && i > 0) value -= sg.adjoint(p[i] - p[i - 1]) * v.values[i - 1];
    if (i >= zero && i + 1 < count) value -= sg.forward(p[i + 1] - p[i]) * v.values[i + 1];
    out.vectors[i] = value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernel

namespace {

// Evaluates k(s,t) with the integrals reduced to
//   Q(r)  = ∫_0^r T(w)♯|G|T(w) dw   (both arguments ≥ 0)
//   Q̃(r)  = ∫_0^r T(w)|G|T(w)♯ dw   (both arguments < 0)
// and caches them per r within one evaluation pass.
class KernelEvaluator {
 public:
  KernelEvaluator(const Semigroup& sg, const GDecomposition& decomp, const QuadratureSpec& quad)
      : sg_(sg), decomp_(decomp), quad_(quad) {}

  KernelEntry operator()(double s, double t) {
    KernelEntry out{s, t, CMatrix(), 0.0};
    if (s < 0.0 && t < 0.0) {
      const double near = std::max(s, t);
      const CMatrix left = sg_.forward(near - t);
      const CMatrix right = sg_.adjoint(near - s);
      const QuadratureResult& q = integral(-near, false);
      out.value = left * q.value * right + sg_.forward(-t) * sg_.adjoint(-s);
      out.quadrature_error = q.error_estimate * left.norm() * right.norm();
    } else if (s < 0.0) {
      out.value = sg_.adjoint(t - s);
    } else if (t < 0.0) {
      out.value = sg_.forward(s - t);
    } else {
      const double near = std::min(s, t);
      const CMatrix left = sg_.adjoint(t - near);
      const CMatrix right = sg_.forward(s - near);
      const QuadratureResult& q = integral(near, true);
      out.value = sg_.adjoint(t) * sg_.forward(s) + left * q.value * right;
      out.quadrature_error = q.error_estimate * left.norm() * right.norm();
    }
    return out;
  }

 private:
  const QuadratureResult& integral(double r, bool forward_side) {
    auto& cache = forward_side ? forward_cache_ : backward_cache_;
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    const CMatrix& mod = decomp_.absG;
    QuadratureResult q = integrate_matrix(
        [&](double w) -> CMatrix {
          const CMatrix tw = sg_.forward(w);
          const CMatrix tw_sharp = sg_.metric().adjoint(tw);
          return forward_side ? CMatrix(tw_sharp * mod * tw) : CMatrix(tw * mod * tw_sharp);
        },
        0.0, r, quad_);
    return cache.emplace(r, std::move(q)).first->second;
  }

  const Semigroup& sg_;
  const GDecomposition& decomp_;
  const QuadratureSpec& quad_;
  std::map<double, QuadratureResult> forward_cache_;
  std::map<double, QuadratureResult> backward_cache_;
};

}  // namespace

KernelEntry kernel_value(const Semigroup& sg, const GDecomposition& decomp, double s, double t,
                         const QuadratureSpec& quad) {
  KernelEvaluator eval(sg, decomp, quad);
  return eval(s, t);
}

BlockGram f_gram(const Semigroup& sg, const std::vector<double>& points) {
  const Index n = sg.dim();
  const Index count = static_cast<Index>(points.size());
  BlockGram out;
  out.matrix.resize(n * count, n * count);
  const CMatrix& m = sg.metric().matrix();
  for (Index r = 0; r < count; ++r) {
    for (Index c = 0; c < count; ++c) {
      out.matrix.block(n * r, n * c, n, n) = m * sg.hermitian(points[c] - points[r]);
    }
  }
  return out;
}

BlockGram k_gram(const Semigroup& sg, const GDecomposition& decomp,
                 const std::vector<double>& points, const QuadratureSpec& quad) {
  const Index n = sg.dim();
  const Index count = static_cast<Index>(points.size());
  KernelEvaluator eval(sg, decomp, quad);
  BlockGram out;
  out.matrix.resize(n * count, n * count);
  const CMatrix& m = sg.metric().matrix();
  for (Index r = 0; r < count; ++r) {
    for (Index c = 0; c < count; ++c) {
      const KernelEntry e = eval(points[c], points[r]);
      out.matrix.block(n * r, n * c, n, n) = m * e.value;
      out.quadrature_error += e.quadrature_error;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic forms

double FormEvaluation::relative_gap() const {
  const double gap = std::abs(value - integral_route);
  return magnitude > 0.0 ? gap / magnitude : gap;
}

namespace {

struct IntegralRoute {
  double negative_g = 0.0;  // Σ∫⟨(−G)v, v⟩ + ‖v(0)‖²
  double modulus = 0.0;     // Σ∫⟨|G|v, v⟩ + ‖v(0)‖²
  double error = 0.0;
};

IntegralRoute integral_route(const Semigroup& sg, const GDecomposition& decomp,
                             const FiniteSupportFunction& h, const QuadratureSpec& quad) {
  const VTransform v = v_transform(sg, h);
  const MetricContext& ctx = sg.metric();
  const std::size_t zero = h.zero_index();
  const auto& p = h.points;
  IntegralRoute out;
  const double at_zero = ctx.norm_sq(v.values[zero]);
  out.negative_g = at_zero;
  out.modulus = at_zero;

  auto accumulate = [&](const CVector& start, double length, bool adjoint_side) {
    const QuadratureResult q = integrate_matrix(
        [&](double w) -> CMatrix {
          const CVector x = (adjoint_side ? sg.adjoint(w) : sg.forward(w)) * start;
          CMatrix pair(2, 1);
          pair(0, 0) = -ctx.form(decomp.G, x);
          pair(1, 0) = ctx.form(decomp.absG, x);
          return pair;
        },
        0.0, length, quad);
    out.negative_g += q.value(0, 0).real();
    out.modulus += q.value(1, 0).real();
    out.error += q.error_estimate;
  };
  // On [σ_j, σ_{j−1}] v(u) = T(u − σ_j)♯v(σ_j); on [τ_{k−1}, τ_k] v(u) = T(τ_k − u)v(τ_k).
  for (std::size_t i = 0; i < zero; ++i) accumulate(v.values[i], p[i + 1] - p[i], true);
  for (std::size_t i = zero + 1; i < p.size(); ++i) accumulate(v.values[i], p[i] - p[i - 1], false);
  return out;
}

FormEvaluation evaluate_form(const CMatrix& gram, double gram_error, const CVector& c,
                             double route_value, double route_error, const QuadratureSpec& quad) {
  FormEvaluation out;
  const Complex value = c.dot(gram * c);
  out.value = value.real();
  out.imaginary = value.imag();
  double magnitude = 0.0;
  const CMatrix terms = c.conjugate().asDiagonal() * gram * c.asDiagonal();
  magnitude = terms.cwiseAbs().sum();
  out.magnitude = magnitude;
  out.integral_route = route_value;
  out.quadrature_error = route_error + gram_error * c.squaredNorm();
  const double tolerance =
      10.0 * (out.quadrature_error + quad.rel_tol * magnitude + quad.abs_tol);
  out.routes_agree = std::abs(out.value - out.integral_route) <= tolerance;
  return out;
}

}  // namespace

FormEvaluation s_f(const Semigroup& sg, const GDecomposition& decomp,
                   const FiniteSupportFunction& h, const QuadratureSpec& quad) {
  require_dim(sg, h);
  const BlockGram gram = f_gram(sg, h.points);
  const IntegralRoute route = integral_route(sg, decomp, h, quad);
  return evaluate_form(gram.matrix, 0.0, h.stacked(), route.negative_g, route.error, quad);
}

FormEvaluation s_k(const Semigroup& sg, const GDecomposition& decomp,
                   const FiniteSupportFunction& h, const QuadratureSpec& quad) {
  require_dim(sg, h);
  const BlockGram gram = k_gram(sg, decomp, h.points, quad);
  const IntegralRoute route = integral_route(sg, decomp, h, quad);
  return evaluate_form(gram.matrix, gram.quadrature_error, h.stacked(), route.modulus,
                       route.error, quad);
}

Complex f_cross_form(const Semigroup& sg, const FiniteSupportFunction& h,
                     const FiniteSupportFunction& g) {
  require_dim(sg, h);
  if (h.points != g.points) throw InvalidArgument("f_cross_form: supports differ");
  return g.stacked().dot(f_gram(sg, h.points).matrix * h.stacked());
}

namespace {

void require_positive(const FormEvaluation& sk) {
  if (!(sk.value > 1e-12 * std::max(sk.magnitude, 1e-300))) {
    std::ostringstream os;
    os << "S_k(h) = " << sk.value << " is not positive";
    throw PreconditionError(os.str());
  }
}

FiniteSupportFunction h_prime_from(const Semigroup& sg, const GDecomposition& decomp,
                                   const FiniteSupportFunction& h) {
  VTransform v = v_transform(sg, h);
  const std::size_t zero = h.zero_index();
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (i != zero) v.values[i] = -(decomp.J * v.values[i]);
  }
  return h_from_v(sg, v);
}

}  // namespace

FiniteSupportFunction h_prime(const Semigroup& sg, const GDecomposition& decomp,
                              const FiniteSupportFunction& h, const QuadratureSpec& quad) {
  require_positive(s_k(sg, decomp, h, quad));
  return h_prime_from(sg, decomp, h);
}

ConditionIIIReport check_condition_iii(const Semigroup& sg, const GDecomposition& decomp,
                                       const FiniteSupportFunction& h, const QuadratureSpec& quad,
                                       double tolerance) {
  const FormEvaluation sk = s_k(sg, decomp, h, quad);
  require_positive(sk);
  const FiniteSupportFunction hp = h_prime_from(sg, decomp, h);
  ConditionIIIReport out;
  out.cross = f_cross_form(sg, h, hp);
  out.sk = sk.value;
  out.sk_prime = s_k(sg, decomp, hp, quad).value;
  out.ratio = std::abs(out.cross) / std::sqrt(out.sk * std::max(out.sk_prime, 0.0));
  out.cross_deviation = std::abs(out.cross - out.sk) / out.sk;
  out.prime_deviation = std::abs(out.sk_prime - out.sk) / out.sk;

  // sup_g |g*Fc|² / (c*Kc · g*Kg) = (Fc)* K⁺ (Fc) / (c*Kc).
  const CVector c = h.stacked();
  const CVector fc = f_gram(sg, h.points).matrix * c;
  const HermitianEig keig = hermitian_eig(k_gram(sg, decomp, h.points, quad).matrix);
  const double cut = 1e-12 * keig.eigenvalues.cwiseAbs().maxCoeff();
  const CMatrix pinv = hermitian_function(keig, [cut](double x) { return x > cut ? 1.0 / x : 0.0; });
  out.best_ratio = std::sqrt(std::max(fc.dot(pinv * fc).real(), 0.0) / out.sk);

  out.passed = out.cross_deviation <= tolerance && out.prime_deviation <= tolerance &&
               std::abs(out.ratio - 1.0) <= tolerance;
  return out;
}

MajorizationReport check_majorization(const Semigroup& sg, const GDecomposition& decomp,
                                      const FiniteSupportFunction& h, const QuadratureSpec& quad) {
  const FormEvaluation f = s_f(sg, decomp, h, quad);
  const FormEvaluation k = s_k(sg, decomp, h, quad);
  MajorizationReport out;
  out.sf = f.value;
  out.sk = k.value;
  out.slack = k.value - std::abs(f.value);
  out.scale = std::max({1.0, f.magnitude, k.magnitude});
  out.passed = std::abs(f.value) <= k.value + kInequalitySlack * out.scale;
  return out;
}

TranslationReport check_translation_bound(const Semigroup& sg, const GDecomposition& decomp,
                                          const FiniteSupportFunction& h, double xi, double beta,
                                          const QuadratureSpec& quad) {
  TranslationReport out;
  out.xi = xi;
  const FormEvaluation base = s_k(sg, decomp, h, quad);
  const FormEvaluation moved = s_k(sg, decomp, h.shifted(xi), quad);
  out.s0 = base.value;
  out.s_xi = moved.value;
  out.rho = std::exp(8.0 * beta * std::abs(xi));
  out.ratio = out.s0 > 0.0 ? out.s_xi / out.s0 : 0.0;
  out.observed_exponent =
      (xi != 0.0 && out.ratio > 0.0) ? std::log(out.ratio) / std::abs(xi) : 0.0;
  const double scale = std::max({1.0, base.magnitude, moved.magnitude});
  out.passed = out.s_xi <= out.rho * out.s0 * (1.0 + 1e-8) + kInequalitySlack * scale;
  return out;
}

double translation_by_cases(const Semigroup& sg, const GDecomposition& decomp,
                            const FiniteSupportFunction& h, double xi,
                            const QuadratureSpec& quad) {
  if (xi == 0.0) return s_k(sg, decomp, h, quad).value;
  if (xi < 0.0) {
    // S_A(h, ξ) = S_{A♯}(Rh, −ξ); A♯ has the same G.
    return translation_by_cases(sg.reflected(), decomp, h.reflected(), -xi, quad);
  }
  const std::size_t zero = h.zero_index();
  if (zero > 0 && h.points[zero - 1] > -xi) {
    // Bring σ₁ to the origin and translate by the remainder.
    const double first = h.points[zero - 1];
    return translation_by_cases(sg, decomp, h.shifted(-first), xi + first, quad);
  }

  // Every negative point lies at or left of −ξ.
  const MetricContext& ctx = sg.metric();
  const VTransform v = v_transform(sg, h);
  const CVector v0 = v.values[zero];
  const bool has_negative = zero > 0;
  const double sigma1 = has_negative ? h.points[zero - 1] : 0.0;
  const CVector v_sigma = has_negative ? v.values[zero - 1] : CVector::Zero(h.dim());
  const CVector y0 = has_negative ? CVector(v0 - sg.adjoint(-sigma1) * v_sigma) : v0;

  auto modulus_integral = [&](auto path, double length) {
    return integrate_matrix(
               [&](double w) -> CMatrix {
                 CMatrix out(1, 1);
                 out(0, 0) = ctx.form(decomp.absG, path(w));
                 return out;
               },
               0.0, length, quad)
        .value(0, 0)
        .real();
  };
  double value = s_k(sg, decomp, h, quad).value - ctx.norm_sq(v0);
  if (has_negative) {
    // ∫_{−ξ}^0 ‖C T(u − σ₁)♯v(σ₁)‖² du with u = −ξ + w.
    value -= modulus_integral(
        [&](double w) -> CVector { return sg.adjoint(-xi + w - sigma1) * v_sigma; }, xi);
  }
  CVector seam = sg.forward(xi) * y0;
  if (has_negative) seam += sg.adjoint(-sigma1 - xi) * v_sigma;
  value += ctx.norm_sq(seam);
  // ∫_0^ξ ‖C T(ξ − u)y(0)‖² du with w = ξ − u.
  value += modulus_integral([&](double w) -> CVector { return sg.forward(w) * y0; }, xi);
  return value;
}

}  // namespace kreindil
