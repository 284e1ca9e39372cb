#pragma once

#include "cssp/types.hpp"

namespace cssp {

// Rank-k leverage profile of a matrix: scores[i] is the squared Euclidean
// norm of row i of the top-k right singular basis, so the scores lie in
// [0, 1] and sum to k. `order` sorts the scores descending, ties broken by
// ascending column index; entries are 1-based.
struct LeverageProfile {
  Index k = 0;
  Vector scores;
  IndexList order;
};

// Least-squares fit of log score = log beta - alpha * log rank over the
// top `fitted_count` sorted positive scores.
struct PowerLawFit {
  double alpha = 0.0;
  double beta = 0.0;
  double r_squared = 0.0;
  Index fitted_count = 0;
};

// v_k must be n x k with orthonormal columns (checked to 1e-8 max deviation).
LeverageProfile leverage_scores(const Matrix& v_k, Index k);

// 1-based ranks sorted by descending score, ties by ascending index.
IndexList descending_order(const Vector& scores);

// Wraps an existing score vector (e.g. prescribed targets) as a profile.
LeverageProfile profile_from_scores(Vector scores, Index k);

// Fits over the largest min(top_t, #positive) scores; at least two positive
// scores are required. Zero scores are excluded since their log is undefined.
PowerLawFit fit_power_law(const LeverageProfile& profile, Index top_t);

} // namespace cssp
