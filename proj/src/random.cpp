#include "kreindil/random.hpp"

#include <Eigen/QR>

namespace kreindil {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

CMatrix random_complex_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  CMatrix out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = Complex(re, im);
    }
  }
  return out;
}

CVector random_complex_vector(Rng& rng, Index n) { return random_complex_matrix(rng, n, 1); }

CMatrix random_hermitian(Rng& rng, Index n) {
  return hermitian_part(random_complex_matrix(rng, n, n));
}

CMatrix random_unitary(Rng& rng, Index n) {
  const CMatrix g = random_complex_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace kreindil
