#pragma once

#include "cssp/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cssp {

inline constexpr const char* kBasisExact = "exact";
inline constexpr const char* kBasisFrequentDirections = "frequent-directions";
inline constexpr const char* kBasisRangefinder = "rangefinder";

// An n x k matrix with orthonormal columns standing in for the top-k right
// singular basis. Producers guarantee ||Z^T Z - I||_max <= 1e-10.
struct BasisArtifact {
  Matrix z;
  std::string kind;
  double epsilon = 0.0;
  std::optional<std::uint64_t> seed;
};

// Top-k right singular vectors from the SVD; k must not exceed rank(A).
BasisArtifact exact_basis(const Matrix& a, Index k);

// Row-streaming sketch of width ceil(k + k/epsilon) with the shrink-by-
// middle-singular-value compaction. The resulting Z satisfies
// ||A - A Z Z^T||_F^2 <= (1 + epsilon) ||A - A_k||_F^2; a sketch at least
// as tall as A degenerates to the exact path.
BasisArtifact frequent_directions_basis(const Matrix& a, Index k, double epsilon);

// Gaussian subspace iteration on the co-range of A with oversampling 10 and
// ceil(log(min(m,n)/k) / epsilon) power steps (capped at 20). Spectral
// guarantee (sqrt(2) + epsilon) ||A - A_k||_2 holds in expectation over seeds.
BasisArtifact rangefinder_basis(const Matrix& a, Index k, double epsilon,
                                std::uint64_t seed);

} // namespace cssp
