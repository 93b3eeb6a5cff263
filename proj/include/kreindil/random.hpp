#pragma once

#include <cstdint>
#include <random>

#include "kreindil/numerics.hpp"

namespace kreindil {

using Rng = std::mt19937_64;

/// A generator seeded from (seed, stream) so parallel workers draw disjoint,
/// schedule-independent sequences.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Entries with independent standard normal real and imaginary parts.
CMatrix random_complex_matrix(Rng& rng, Index rows, Index cols);
CVector random_complex_vector(Rng& rng, Index n);
CMatrix random_hermitian(Rng& rng, Index n);
CMatrix random_unitary(Rng& rng, Index n);
double uniform(Rng& rng, double lo, double hi);

}  // namespace kreindil
