#include "cssp/selectors.hpp"

#include "cssp/errors.hpp"
#include "cssp/matrix.hpp"
#include "cssp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cssp {

namespace {

void validate_profile(const LeverageProfile& profile) {
  const Index n = profile.scores.size();
  if (profile.k < 1 || n < 1) {
    throw InvalidArgumentError("selector: empty profile");
  }
  if (profile.order.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgumentError("selector: order length does not match scores");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const Index idx : profile.order) {
    if (idx < 1 || idx > n || seen[static_cast<std::size_t>(idx - 1)]) {
      throw InvalidArgumentError("selector: order is not a permutation of 1..n");
    }
    seen[static_cast<std::size_t>(idx - 1)] = true;
  }
  double prev = std::numeric_limits<double>::infinity();
  for (const Index idx : profile.order) {
    const double s = profile.scores(idx - 1);
    if (s < 0.0 || s > 1.0 + 1e-10) {
      throw InvalidArgumentError("selector: score out of [0, 1]");
    }
    if (s > prev) {
      throw InvalidArgumentError("selector: order does not sort scores descending");
    }
    prev = s;
  }
}

double mass_at(const LeverageProfile& profile, const IndexList& indices) {
  double mass = 0.0;
  for (const Index idx : indices) {
    mass += profile.scores(idx - 1);
  }
  return mass;
}

} // namespace

SelectionResult select_deterministic(const LeverageProfile& profile, double theta) {
  validate_profile(profile);
  const Index n = profile.scores.size();
  const double total = profile.scores.sum();
  if (theta <= 0.0 || theta >= static_cast<double>(profile.k)) {
    throw InfeasibleThresholdError("select_deterministic: theta must lie in (0, k)");
  }

  Index c = 0;
  double running = 0.0;
  for (Index i = 0; i < n; ++i) {
    running += profile.scores(profile.order[static_cast<std::size_t>(i)] - 1);
    if (running > theta) {
      c = i + 1;
      break;
    }
  }
  if (c == 0) {
    // Rounding can leave the full mass at or below theta even though
    // theta < k; no prefix strictly exceeds it then.
    throw InfeasibleThresholdError("select_deterministic: total mass " +
                                   std::to_string(total) +
                                   " never strictly exceeds theta");
  }
  if (c < profile.k) {
    c = profile.k;
  }

  SelectionResult out;
  out.method = kMethodDeterministic;
  out.theta = theta;
  out.c = c;
  out.indices.assign(profile.order.begin(), profile.order.begin() + c);
  out.mass = mass_at(profile, out.indices);
  return out;
}

SelectionResult select_top_c(const LeverageProfile& profile, Index c) {
  validate_profile(profile);
  if (c < 1 || c > profile.scores.size()) {
    throw InvalidArgumentError("select_top_c: c out of range");
  }
  SelectionResult out;
  out.method = kMethodDeterministic;
  out.c = c;
  out.indices.assign(profile.order.begin(), profile.order.begin() + c);
  out.mass = mass_at(profile, out.indices);
  return out;
}

SelectionResult select_randomized(const LeverageProfile& profile, Index c,
                                  std::uint64_t seed) {
  validate_profile(profile);
  if (c < 1) {
    throw InvalidArgumentError("select_randomized: c must be positive");
  }
  const Index n = profile.scores.size();
  std::vector<double> cum(static_cast<std::size_t>(n));
  double running = 0.0;
  for (Index i = 0; i < n; ++i) {
    running += profile.scores(i);
    cum[static_cast<std::size_t>(i)] = running;
  }
  if (running <= 0.0) {
    throw InvalidArgumentError("select_randomized: profile has no mass");
  }

  SelectionResult out;
  out.method = kMethodRandomized;
  out.seed = seed;
  out.c = c;
  out.indices.reserve(static_cast<std::size_t>(c));
  Rng rng(seed);
  for (Index draw = 0; draw < c; ++draw) {
    const double u = rng.uniform01() * running;
    // First strictly-greater cumulative entry; zero-weight columns can
    // never satisfy it.
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const Index idx = it == cum.end() ? n : static_cast<Index>(it - cum.begin()) + 1;
    out.indices.push_back(std::min(idx, n));
  }
  out.mass = mass_at(profile, out.indices);
  return out;
}

SelectionResult select_pivoted_qr(const Matrix& a, Index c) {
  if (c < 1 || c > a.cols()) {
    throw InvalidArgumentError("select_pivoted_qr: c out of range");
  }
  const PivotedQr qr = pivoted_qr(a);
  SelectionResult out;
  out.method = kMethodPivotedQr;
  out.c = c;
  out.indices.assign(qr.perm.begin(), qr.perm.begin() + c);
  out.mass = 0.0;
  return out;
}

SelectionResult select_with_basis(const Matrix& a, const Matrix& z, Index k,
                                  double theta) {
  if (z.rows() != a.cols()) {
    throw InvalidArgumentError("select_with_basis: z must have one row per column of A");
  }
  SelectionResult out = select_deterministic(leverage_scores(z, k), theta);
  out.method = kMethodApproxBasis;
  return out;
}

} // namespace cssp
