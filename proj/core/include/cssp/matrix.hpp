#pragma once

#include "cssp/types.hpp"

#include <utility>

namespace cssp {

// Thin SVD A = U diag(sigma) V^T truncated at the numerical rank.
// sigma is strictly positive and non-increasing; u is m x rank and v is
// n x rank, both with orthonormal columns.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
  Index rank = 0;
};

struct PivotedQr {
  Matrix q;       // m x min(m,n), orthonormal columns
  Matrix r;       // min(m,n) x n, upper triangular, |r_ii| non-increasing
  IndexList perm; // 1-based pivot order: A(:, perm) = Q R
};

// Numerical rank cutoff: singular values above max(m,n) * eps * sigma_1 count.
SvdFactors svd(const Matrix& a);

// (sigma_{k+1}, sqrt(sum_{i>k} sigma_i^2)); both zero once k >= rank.
std::pair<double, double> best_rank_k_errors(const SvdFactors& f, Index k);

// Businger-Golub column pivoting: each step takes the remaining column with
// the largest residual norm.
PivotedQr pivoted_qr(const Matrix& a);

// Largest singular value via power iteration on A^T A, converged on
// successive Rayleigh quotients to well below 1e-8 relative.
double spectral_norm(const Matrix& a);

// A - Q Q^T A for Q an orthonormal basis of span(C). The basis is
// rank-revealing with drop tolerance 1e-12 times the largest column norm,
// so duplicate or dependent columns of C do not disturb the result.
Matrix projection_residual(const Matrix& a, const Matrix& c);

// The Q used by projection_residual; m x rank(C), empty when C is zero.
Matrix orthonormal_range(const Matrix& c);

} // namespace cssp
