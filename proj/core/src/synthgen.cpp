#include "cssp/synthgen.hpp"

#include "cssp/errors.hpp"
#include "cssp/leverage.hpp"
#include "cssp/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

namespace cssp {

namespace {

constexpr double kFeasibilityTol = 1e-10;

Matrix random_orthogonal(Index k, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix g = gaussian_matrix(k, k, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(k, k);
  // Fix the sign convention so the factorization is unique.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

void validate_targets(const Vector& targets, Index k) {
  for (Index i = 0; i < targets.size(); ++i) {
    if (!(targets(i) >= 0.0 && targets(i) <= 1.0)) {
      throw InfeasibleTargetsError("targets must lie in [0, 1]; entry " +
                                   std::to_string(i + 1) + " is " +
                                   std::to_string(targets(i)));
    }
  }
  const double sum = targets.sum();
  if (std::abs(sum - static_cast<double>(k)) > kFeasibilityTol * std::max<double>(1.0, k)) {
    throw InfeasibleTargetsError("targets sum to " + std::to_string(sum) +
                                 ", expected k = " + std::to_string(k));
  }
}

// Active rows sorted by descending current squared norm.
struct ActiveRow {
  double norm2;
  Index row;
};

} // namespace

Matrix uniform_row_basis(Index n, Index k) {
  if (k < 1 || k > n) {
    throw InvalidArgumentError("uniform_row_basis: need 1 <= k <= n");
  }
  const Index max_pairs = (n - 1) / 2;
  Index pairs = k / 2;
  Index singles = k % 2;
  if (pairs > max_pairs) {
    // Only k = n with n even lands here; swap one pair for the two
    // uniform-magnitude singleton columns.
    pairs = max_pairs;
    singles = 2;
  }
  if (singles == 2 && n % 2 != 0) {
    throw InvalidArgumentError("uniform_row_basis: internal column budget error");
  }

  Matrix v(n, k);
  Index col = 0;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  if (singles >= 1) {
    v.col(col++).setConstant(inv_sqrt_n);
  }
  if (singles == 2) {
    for (Index i = 0; i < n; ++i) {
      v(i, col) = (i % 2 == 0) ? inv_sqrt_n : -inv_sqrt_n;
    }
    ++col;
  }
  const double amp = std::sqrt(2.0 / static_cast<double>(n));
  for (Index f = 1; f <= pairs; ++f) {
    for (Index i = 0; i < n; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(f) *
                           static_cast<double>(i) / static_cast<double>(n);
      v(i, col) = amp * std::cos(angle);
      v(i, col + 1) = amp * std::sin(angle);
    }
    col += 2;
  }
  return v;
}

Matrix orthonormal_with_row_norms(const Vector& targets, Index k,
                                  std::uint64_t seed, bool validate_steps) {
  const Index n = targets.size();
  if (k < 1 || k > n) {
    throw InfeasibleTargetsError("orthonormal_with_row_norms: need 1 <= k <= n");
  }
  validate_targets(targets, k);

  const double uniform = static_cast<double>(k) / static_cast<double>(n);
  if ((targets.array() - uniform).abs().maxCoeff() < 1e-15) {
    return uniform_row_basis(n, k);
  }

  // Work on targets sorted descending; the achieved rows are permuted back
  // to the requested positions at the end. Sorting keeps the invariant that
  // the current norm multiset majorizes the remaining targets, which
  // guarantees a straddling adjacent row pair for every step.
  const IndexList target_order = descending_order(targets);

  Matrix v = Matrix::Zero(n, k);
  v.topRows(k) = random_orthogonal(k, seed);

  std::vector<ActiveRow> active;
  active.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < k; ++i) {
    active.push_back({v.row(i).squaredNorm(), i});
  }
  for (Index i = k; i < n; ++i) {
    active.push_back({0.0, i});
  }
  std::stable_sort(active.begin(), active.end(),
                   [](const ActiveRow& a, const ActiveRow& b) { return a.norm2 > b.norm2; });

  // fixed_row[j] = work row achieving the j-th largest target.
  IndexList fixed_row(static_cast<std::size_t>(n), Index{-1});

  for (std::size_t step = 0; step < target_order.size(); ++step) {
    const double t = targets(target_order[step] - 1);

    if (active.size() == 1) {
      // Sum conservation pins the last row; it absorbs the rounding drift.
      fixed_row[step] = active.front().row;
      active.clear();
      break;
    }

    // Exact hit: claim the row without rotating.
    bool claimed = false;
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (active[j].norm2 == t) {
        fixed_row[step] = active[j].row;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
        claimed = true;
        break;
      }
    }
    if (claimed) {
      continue;
    }

    // Adjacent straddle: first position with norm below t.
    std::size_t lo_pos = active.size();
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (active[j].norm2 < t) {
        lo_pos = j;
        break;
      }
    }
    if (lo_pos == 0 || lo_pos == active.size()) {
      const double hi = active.front().norm2;
      const double lo = active.back().norm2;
      if (t > hi + 1e-9 || t < lo - 1e-9) {
        throw Error("orthonormal_with_row_norms: majorization invariant violated");
      }
      lo_pos = (lo_pos == 0) ? 1 : active.size() - 1;
    }
    const std::size_t hi_pos = lo_pos - 1;
    const Index hi_row = active[hi_pos].row;
    const Index lo_row = active[lo_pos].row;
    const double a = active[hi_pos].norm2;
    const double g = active[lo_pos].norm2;

    // Rotate rows (hi, lo) so the hi row lands exactly on t:
    // (g - t) x^2 + 2 b x + (a - t) = 0 with x = tan(angle). The straddle
    // g <= t <= a makes the discriminant nonnegative for any b.
    const double b = v.row(hi_row).dot(v.row(lo_row));
    const double qa = g - t;
    const double qc = a - t;
    const double disc = std::max(0.0, b * b - qa * qc);
    const double sq = std::sqrt(disc);
    double x = 0.0;
    if (qa == 0.0) {
      x = (b != 0.0) ? -qc / (2.0 * b) : 0.0;
    } else {
      const double qq = -(b + std::copysign(sq, b));
      const double x1 = (qq != 0.0) ? qc / qq : std::numeric_limits<double>::infinity();
      const double x2 = qq / qa;
      x = (std::abs(x1) <= std::abs(x2)) ? x1 : x2;
      if (!std::isfinite(x)) {
        x = std::isfinite(x2) ? x2 : 0.0;
      }
    }
    const double c = 1.0 / std::sqrt(1.0 + x * x);
    const double s = x * c;
    const Vector hi_new = c * v.row(hi_row).transpose() + s * v.row(lo_row).transpose();
    const Vector lo_new = -s * v.row(hi_row).transpose() + c * v.row(lo_row).transpose();
    v.row(hi_row) = hi_new.transpose();
    v.row(lo_row) = lo_new.transpose();

    fixed_row[step] = hi_row;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(hi_pos));
    // hi_pos removal shifts lo_pos down by one.
    active[lo_pos - 1].norm2 = v.row(lo_row).squaredNorm();
    const ActiveRow partner = active[lo_pos - 1];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(lo_pos - 1));
    const auto insert_at = std::lower_bound(
        active.begin(), active.end(), partner,
        [](const ActiveRow& lhs, const ActiveRow& rhs) { return lhs.norm2 > rhs.norm2; });
    active.insert(insert_at, partner);

    if (validate_steps) {
      const double dev =
          (v.transpose() * v - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
      if (dev > 1e-10) {
        throw Error("orthonormal_with_row_norms: orthonormality drifted to " +
                    std::to_string(dev));
      }
    }
  }

  // Place achieved rows at the requested positions.
  Matrix out(n, k);
  for (std::size_t step = 0; step < target_order.size(); ++step) {
    if (fixed_row[step] < 0) {
      throw Error("orthonormal_with_row_norms: internal bookkeeping error");
    }
    out.row(target_order[step] - 1) = v.row(fixed_row[step]);
  }
  return out;
}

Matrix complete_basis(const Matrix& v_k) {
  const Index n = v_k.rows();
  const Index k = v_k.cols();
  if (k >= n) {
    throw EmptyComplementError("complete_basis: nothing to complete when k >= n");
  }
  const double dev =
      (v_k.transpose() * v_k - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    throw NotOrthonormalError("complete_basis: input columns deviate from orthonormal by " +
                              std::to_string(dev));
  }
  Eigen::HouseholderQR<Matrix> qr(v_k);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - k);
}

Matrix assemble_matrix(const SyntheticSpec& spec) {
  if (spec.m < 1 || spec.n < 1 || spec.k < 1 || spec.k > std::min(spec.m, spec.n)) {
    throw InvalidArgumentError("assemble_matrix: need 1 <= k <= min(m, n)");
  }
  if (spec.targets.size() != spec.n) {
    throw InfeasibleTargetsError("assemble_matrix: targets length must equal n");
  }

  const Matrix v_k = orthonormal_with_row_norms(spec.targets, spec.k, mix_seed(spec.seed, 1));
  Matrix v(spec.n, spec.n);
  if (spec.k == spec.n) {
    v = v_k;
  } else {
    v << v_k, complete_basis(v_k);
  }

  Rng u_rng(mix_seed(spec.seed, 2));
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(spec.m, spec.m, u_rng));
  const Matrix u = qr.householderQ() * Matrix::Identity(spec.m, spec.m);

  const Index p = std::min(spec.m, spec.n);
  Rng s_rng(mix_seed(spec.seed, 3));
  Vector sigma(p);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Index i = 0; i < p; ++i) {
      sigma(i) = std::abs(s_rng.gaussian());
    }
    std::sort(sigma.data(), sigma.data() + p, std::greater<double>());
    if (spec.k == p) {
      break;
    }
    // Keep the top-k right subspace well separated from the rest.
    if (sigma(spec.k - 1) - sigma(spec.k) > 1e-6 * sigma(spec.k - 1)) {
      break;
    }
  }

  return u.leftCols(p) * sigma.asDiagonal() * v.leftCols(p).transpose();
}

Vector near_uniform_targets(Index n, Index k, std::uint64_t seed) {
  if (k < 1 || k >= n) {
    throw InvalidArgumentError("near_uniform_targets: need 1 <= k < n");
  }
  const double a = static_cast<double>(k) / static_cast<double>(n);
  Vector t = Vector::Constant(n, a);
  Rng rng(seed);
  const double bound = std::min(a, 1.0 - a);
  for (Index i = 0; i + 1 < n; i += 2) {
    double beta = 0.0;
    for (int tries = 0; tries < 10000; ++tries) {
      beta = 0.01 * rng.gaussian(); // centered, sigma = 1/100
      if (std::abs(beta) <= bound) {
        break;
      }
      beta = 0.0;
    }
    // hi stays in [a, 2a], so 2a - hi evaluates exactly and the pair keeps
    // its sum bit-for-bit.
    const double hi = a + std::abs(beta);
    const double lo = 2.0 * a - hi;
    t(i) = (beta >= 0.0) ? hi : lo;
    t(i + 1) = (beta >= 0.0) ? lo : hi;
  }
  // The last entry absorbs accumulated rounding so the left-to-right sum
  // equals k exactly.
  double partial = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    partial += t(i);
  }
  const double last = static_cast<double>(k) - partial;
  if (last >= 0.0 && last <= 1.0) {
    t(n - 1) = last;
  }
  return t;
}

PowerLawTargets power_law_targets(Index n, Index k, double alpha) {
  if (alpha <= 0.0) {
    throw InvalidArgumentError("power_law_targets: alpha must be positive");
  }
  if (k < 1 || k >= n) {
    throw InfeasibleTargetsError("power_law_targets: need 1 <= k < n");
  }
  Vector w(n);
  for (Index i = 0; i < n; ++i) {
    w(i) = std::pow(static_cast<double>(i + 1), -alpha);
  }
  const double total = w.sum();

  PowerLawTargets out;
  const double l1 = static_cast<double>(k) / total;
  if (l1 <= 1.0) {
    out.values = (l1 * w.array()).matrix();
    out.capped = false;
    return out;
  }

  // Cap the leading entries at 1 and rescale the i^-alpha tail so the mass
  // still sums to k.
  out.capped = true;
  double tail = total;
  for (Index cap = 1; cap <= k; ++cap) {
    tail -= w(cap - 1);
    const double scale = (static_cast<double>(k - cap)) / tail;
    if (cap == k || scale * w(cap) <= 1.0) {
      out.values = Vector(n);
      for (Index i = 0; i < cap; ++i) {
        out.values(i) = 1.0;
      }
      for (Index i = cap; i < n; ++i) {
        out.values(i) = scale * w(i);
      }
      return out;
    }
  }
  throw Error("power_law_targets: capping failed to converge");
}

} // namespace cssp
