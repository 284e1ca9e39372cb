#include "cssp/leverage.hpp"

#include "cssp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cssp {

IndexList descending_order(const Vector& scores) {
  IndexList order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{1});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return scores(a - 1) > scores(b - 1);
  });
  return order;
}

LeverageProfile profile_from_scores(Vector scores, Index k) {
  LeverageProfile profile;
  profile.k = k;
  profile.order = descending_order(scores);
  profile.scores = std::move(scores);
  return profile;
}

LeverageProfile leverage_scores(const Matrix& v_k, Index k) {
  if (k < 1 || v_k.cols() != k) {
    throw InvalidArgumentError("leverage_scores: v_k must have exactly k columns, k >= 1");
  }
  const Matrix gram = v_k.transpose() * v_k;
  const double dev = (gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    throw NotOrthonormalError("leverage_scores: columns deviate from orthonormal by " +
                              std::to_string(dev));
  }
  LeverageProfile profile;
  profile.k = k;
  profile.scores = v_k.rowwise().squaredNorm();
  profile.order = descending_order(profile.scores);
  return profile;
}

PowerLawFit fit_power_law(const LeverageProfile& profile, Index top_t) {
  if (top_t < 2) {
    throw InvalidArgumentError("fit_power_law: top_t must be at least 2");
  }
  const Index n = profile.scores.size();
  Index positive = 0;
  while (positive < n && profile.scores(profile.order[static_cast<std::size_t>(positive)] - 1) > 0.0) {
    ++positive;
  }
  const Index count = std::min(top_t, positive);
  if (count < 2) {
    throw InsufficientDataError("fit_power_law: fewer than 2 positive scores");
  }

  // Regress log score on log rank.
  double sx = 0.0, sy = 0.0;
  for (Index i = 0; i < count; ++i) {
    sx += std::log(static_cast<double>(i + 1));
    sy += std::log(profile.scores(profile.order[static_cast<std::size_t>(i)] - 1));
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Index i = 0; i < count; ++i) {
    const double dx = std::log(static_cast<double>(i + 1)) - mx;
    const double dy = std::log(profile.scores(profile.order[static_cast<std::size_t>(i)] - 1)) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;

  PowerLawFit fit;
  fit.alpha = -slope;
  fit.beta = std::exp(my - slope * mx);
  fit.fitted_count = count;
  if (syy <= 0.0) {
    fit.r_squared = 1.0; // constant scores: the flat model is exact
  } else {
    const double ss_res = syy - slope * sxy;
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

} // namespace cssp
