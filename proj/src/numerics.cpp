#include "kreindil/numerics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace kreindil {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidArgument(os.str());
  }
}

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

namespace {

// Padé numerator coefficients b_0..b_m (Higham 2005).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// 1-norm thresholds below which degree m reaches unit roundoff in double.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;
// Degree-13 truncation error at ‖X‖₁ = 2 is ~1e-27, far below 2^-64.
constexpr double kTheta13Extended = 2.0;

template <class Mat, std::size_t N>
Mat pade_small(const Mat& a, const std::array<double, N>& b) {
  using Scalar = typename Mat::Scalar;
  using Real = typename Scalar::value_type;
  const Index n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat u_even = Mat::Zero(n, n);
  Mat v = Mat::Zero(n, n);
  Mat power = id;
  for (std::size_t k = 0; k < N; k += 2) {
    v += static_cast<Real>(b[k]) * power;
    if (k + 1 < N) u_even += static_cast<Real>(b[k + 1]) * power;
    power = power * a2;
  }
  const Mat u = a * u_even;
  return (v - u).partialPivLu().solve(v + u);
}

template <class Mat>
Mat pade13(const Mat& a) {
  using Scalar = typename Mat::Scalar;
  using Real = typename Scalar::value_type;
  const auto& b = kPade13;
  auto c = [&](int k) { return static_cast<Real>(b[k]); };
  const Index n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat u_inner = a6 * (c(13) * a6 + c(11) * a4 + c(9) * a2) + c(7) * a6 + c(5) * a4 +
                      c(3) * a2 + c(1) * id;
  const Mat u = a * u_inner;
  const Mat v = a6 * (c(12) * a6 + c(10) * a4 + c(8) * a2) + c(6) * a6 + c(4) * a4 +
                c(2) * a2 + c(0) * id;
  return (v - u).partialPivLu().solve(v + u);
}

template <class Mat>
typename Mat::Scalar::value_type one_norm(const Mat& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <class Mat>
Mat expm_impl(const Mat& m, bool extended) {
  using Real = typename Mat::Scalar::value_type;
  const Index n = m.rows();
  if (n == 0) return m;
  const Real norm = one_norm(m);
  if (!std::isfinite(static_cast<double>(norm))) throw NumericsError("expm: non-finite input");

  Mat result;
  if (!extended && norm <= kTheta3) {
    result = pade_small(m, kPade3);
  } else if (!extended && norm <= kTheta5) {
    result = pade_small(m, kPade5);
  } else if (!extended && norm <= kTheta7) {
    result = pade_small(m, kPade7);
  } else if (!extended && norm <= kTheta9) {
    result = pade_small(m, kPade9);
  } else {
    const double theta = extended ? kTheta13Extended : kTheta13;
    int squarings = 0;
    if (norm > theta) {
      squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm) / theta)));
    }
    const Mat scaled = m / std::ldexp(Real(1), squarings);
    result = pade13(scaled);
    for (int k = 0; k < squarings; ++k) result = result * result;
  }
  if (!result.allFinite()) {
    std::ostringstream os;
    os << "expm: overflow (‖M‖₁ = " << static_cast<double>(norm) << ")";
    throw NumericsError(os.str());
  }
  return result;
}

}  // namespace

CMatrix expm(const CMatrix& m) {
  require_square(m, "expm");
  return expm_impl(m, false);
}

Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic> expm_extended(
    const Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("expm_extended: expected a square matrix");
  return expm_impl(m, true);
}

CMatrix HermitianEig::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

HermitianEig hermitian_eig(const CMatrix& m) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  HermitianEig out;
  const double scale = m.norm();
  out.asymmetry = scale > 0.0 ? (m - m.adjoint()).norm() / scale : 0.0;
  if (m.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) throw NumericsError("hermitian_eig: no convergence");
  // Eigen returns ascending order.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

CMatrix hermitian_function(const HermitianEig& eig, const std::function<double(double)>& fn) {
  CVector mapped(eig.eigenvalues.size());
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) mapped[k] = fn(eig.eigenvalues[k]);
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix psd_sqrt(const CMatrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  return hermitian_function(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

double norm2(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()[0];
}

double max_eigenvalue(const CMatrix& hermitian) {
  require_square(hermitian, "max_eigenvalue");
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(hermitian),
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[hermitian.rows() - 1];
}

double max_generalized_eigenvalue(const CMatrix& a, const CMatrix& b) {
  require_square(a, "max_generalized_eigenvalue");
  require_square(b, "max_generalized_eigenvalue");
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> solver(
      hermitian_part(a), hermitian_part(b), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw InvalidArgument("max_generalized_eigenvalue: metric is not positive definite");
  }
  return solver.eigenvalues()[a.rows() - 1];
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 7/15

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1) {
    throw InvalidArgument("QuadratureSpec: require abs_tol > 0, rel_tol > 0, max_depth >= 1");
  }
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the 7-point rule at kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  int depth;
  CMatrix value;
  double error;
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;  // deterministic tie break
  }
};

Panel gk15(const MatrixFunction& fn, double a, double b, int depth, int& evaluations) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  CMatrix fc = fn(centre);
  ++evaluations;
  CMatrix kronrod = kWgk[7] * fc;
  CMatrix gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    CMatrix f1 = fn(centre - dx);
    CMatrix f2 = fn(centre + dx);
    evaluations += 2;
    if (f1.rows() != fc.rows() || f1.cols() != fc.cols() || f2.rows() != fc.rows() ||
        f2.cols() != fc.cols()) {
      throw InvalidArgument("integrate_matrix: integrand changed shape");
    }
    CMatrix sum = f1 + f2;
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (!kronrod.allFinite()) throw NumericsError("integrate_matrix: non-finite integrand");
  return Panel{a, b, depth, kronrod, (kronrod - gauss).norm()};
}

}  // namespace

QuadratureResult integrate_matrix(const MatrixFunction& fn, double a, double b,
                                  const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) throw InvalidArgument("integrate_matrix: require a <= b");
  QuadratureResult out;
  if (a == b) {
    out.value = fn(a);
    out.value.setZero();
    out.evaluations = 1;
    return out;
  }
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
  Panel first = gk15(fn, a, b, 0, out.evaluations);
  CMatrix total = first.value;
  double total_error = first.error;
  queue.push(std::move(first));

  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * total.norm()); };
  while (total_error > tolerance()) {
    Panel worst = queue.top();
    if (worst.depth >= spec.max_depth) {
      std::ostringstream os;
      os << "integrate_matrix: depth " << spec.max_depth << " exhausted on [" << a << ", " << b
         << "], error estimate " << total_error << " > " << tolerance();
      throw AccuracyError(os.str(), total_error, tolerance());
    }
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(fn, worst.a, mid, worst.depth + 1, out.evaluations);
    Panel right = gk15(fn, mid, worst.b, worst.depth + 1, out.evaluations);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }
  // Re-sum to shed the cancellation accumulated by incremental updates.
  CMatrix resum = CMatrix::Zero(total.rows(), total.cols());
  double err = 0.0;
  std::vector<Panel> panels;
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : panels) {
    resum += p.value;
    err += p.error;
  }
  out.value = std::move(resum);
  out.error_estimate = err;
  return out;
}

}  // namespace kreindil
