#pragma once

#include "cssp/matrix.hpp"
#include "cssp/selectors.hpp"
#include "cssp/types.hpp"

#include <optional>

namespace cssp {

// Residual errors of a column selection against the best-rank-k reference.
// Ratios are reported unsquared; the Theorem-style bounds constrain their
// squares, so callers square them when comparing against 1/(1-eps) etc.
// Ratios are absent when the reference error is zero (k >= rank, flagged).
struct ErrorReport {
  double spectral_abs = 0.0;
  double frobenius_abs = 0.0;
  double spectral_ref = 0.0;
  double frobenius_ref = 0.0;
  std::optional<double> spectral_ratio;
  std::optional<double> frobenius_ratio;
  Index c = 0;
  Index k = 0;
  bool rank_saturated = false;
};

// Column-count formulas compared in one place. dmm08_c uses the randomized
// leverage sampling count ceil(k ln k / eps^2) with the absolute constant
// fixed at 1 by convention; bdm11a_c is ceil(2k / eps).
struct BoundReport {
  double epsilon = 0.0;
  double theorem1_factor = 0.0;
  Index theorem2_c = 0;
  Index dmm08_c = 0;
  Index bdm11a_c = 0;
  double eta = 0.0;
};

// Builds C from the deduplicated selection (duplicates never change the
// span) and projects A onto it.
ErrorReport error_report(const Matrix& a, const SelectionResult& selection, Index k);

// Same, with a precomputed SVD of A so sweeps do not refactor per cell.
ErrorReport error_report(const Matrix& a, const SvdFactors& f,
                         const SelectionResult& selection, Index k);

// k-th largest squared singular value of V_k^T S (the selected rows of v_k,
// transposed); 0 when fewer than k columns are selected.
double lemma1_certificate(const Matrix& v_k, const SelectionResult& selection);

// True iff the numerical rank of V_k^T S equals k at threshold
// tol * sigma_max.
bool check_rank_preservation(const Matrix& v_k, const SelectionResult& selection,
                             double tol);

struct RestrictedRankK {
  Matrix approx;
  ErrorReport report;
};

// Q (Q^T A)_k: the rank-k approximation constrained to span(C); exactly
// optimal in Frobenius norm there and within a factor 2 in spectral norm.
RestrictedRankK restricted_rank_k(const Matrix& a, const SelectionResult& selection,
                                  Index k);

// 1 / (1 - epsilon) for epsilon in (0, 1).
double theorem1_factor(double epsilon);

// ceil(max{(2k/eps)^{1/(1+eta)} - 1, (2k/(eta eps))^{1/eta} - 1, k}).
Index theorem2_column_bound(Index k, double epsilon, double eta);

BoundReport comparison_counts(Index k, double epsilon, double eta);

} // namespace cssp
