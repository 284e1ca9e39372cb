#pragma once

#include "cssp/leverage.hpp"
#include "cssp/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cssp {

inline constexpr const char* kMethodDeterministic = "deterministic-leverage";
inline constexpr const char* kMethodRandomized = "randomized-leverage";
inline constexpr const char* kMethodPivotedQr = "pivoted-qr";
inline constexpr const char* kMethodApproxBasis = "approx-basis";

// Ordered 1-based column choice C = A(:, indices). Sampling with replacement
// may repeat indices; evaluation deduplicates before projecting. `mass` is
// the accumulated leverage mass of the listed indices (0 for pivoted-qr,
// which selects without a profile).
struct SelectionResult {
  IndexList indices;
  Index c = 0;
  double mass = 0.0;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;
};

// Stopping threshold theta = k - epsilon used throughout the bounds.
inline double theta_from_epsilon(Index k, double epsilon) {
  return static_cast<double>(k) - epsilon;
}

// Keeps the top-scoring columns until their mass strictly exceeds theta,
// then pads to c = k if the threshold was crossed earlier. Boundary prefixes
// whose mass equals theta exactly do not stop the scan.
SelectionResult select_deterministic(const LeverageProfile& profile, double theta);

// First c entries of the descending-score order; used for error-vs-c sweeps.
SelectionResult select_top_c(const LeverageProfile& profile, Index c);

// c i.i.d. draws with replacement, p_i = scores[i] / sum(scores).
SelectionResult select_randomized(const LeverageProfile& profile, Index c,
                                  std::uint64_t seed);

// First c pivots of the column-pivoted QR of A.
SelectionResult select_pivoted_qr(const Matrix& a, Index c);

// select_deterministic on the leverage profile of an approximate basis z
// (n x k orthonormal) in place of the exact top-k right singular basis.
SelectionResult select_with_basis(const Matrix& a, const Matrix& z, Index k,
                                  double theta);

} // namespace cssp
