#pragma once

#include "cssp/types.hpp"

#include <cstdint>
#include <string>

namespace cssp {

// Recipe for a synthetic m x n matrix whose rank-k leverage scores equal
// `targets`. Feasibility requires every target in [0, 1] and the sum equal
// to k (within 1e-10), per the Schur-Horn majorization condition.
struct SyntheticSpec {
  Index m = 0;
  Index n = 0;
  Index k = 0;
  Vector targets;
  std::uint64_t seed = 0;
  std::string profile_kind; // near-uniform | power-law | custom
};

struct PowerLawTargets {
  Vector values;
  bool capped = false;
};

// n x k matrix with orthonormal columns and squared row norms all k/n,
// built from constant/alternating/trigonometric columns of the real
// Fourier basis; exact for every 1 <= k <= n.
Matrix uniform_row_basis(Index n, Index k);

// n x k matrix with orthonormal columns whose squared row norms hit
// `targets` within 1e-10. A chain of plane rotations on row pairs fixes one
// row per step to its target exactly while preserving column orthonormality;
// each rotation pairs a row above its target with one below. The seed picks
// the starting k x k orthogonal block. `validate_steps` re-checks
// orthonormality after every rotation (test use; quadratic cost).
Matrix orthonormal_with_row_norms(const Vector& targets, Index k,
                                  std::uint64_t seed,
                                  bool validate_steps = false);

// n x (n-k) orthonormal complement with ||v_k^T complement||_max <= 1e-10.
Matrix complete_basis(const Matrix& v_k);

// A = U Sigma V^T with V = [V_k, V_k_perp] from the two builders above,
// U an orthonormalized Gaussian m x m matrix and Sigma sorted |N(0,1)|
// draws. Sigma is redrawn while the sigma_k / sigma_{k+1} gap is below 1e-6
// relative so the top-k right subspace is well defined.
Matrix assemble_matrix(const SyntheticSpec& spec);

// All k/n, then for each disjoint row pair (1,2), (3,4), ... a N(0, 1/100)
// perturbation is added to one row and subtracted from the other, redrawn
// while either result would leave [0, 1]. The emitted vector sums to k
// exactly in double arithmetic.
Vector near_uniform_targets(Index n, Index k, std::uint64_t seed);

// l_i = l_1 / i^alpha with l_1 = k / sum_i i^-alpha. If l_1 exceeds 1 the
// leading entries are capped at 1 and the tail is renormalized, keeping the
// i^-alpha shape there; `capped` reports whether that happened.
PowerLawTargets power_law_targets(Index n, Index k, double alpha);

} // namespace cssp
