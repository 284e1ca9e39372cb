#include "cssp/evaluation.hpp"

#include "cssp/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace cssp {

namespace {

IndexList deduplicate(const IndexList& indices, Index n) {
  IndexList unique;
  unique.reserve(indices.size());
  std::unordered_set<Index> seen;
  for (const Index idx : indices) {
    if (idx < 1 || idx > n) {
      throw InvalidArgumentError("selection index " + std::to_string(idx) +
                                 " out of range 1.." + std::to_string(n));
    }
    if (seen.insert(idx).second) {
      unique.push_back(idx);
    }
  }
  if (unique.empty()) {
    throw InvalidArgumentError("selection has no indices");
  }
  return unique;
}

Matrix columns_at(const Matrix& a, const IndexList& indices) {
  Matrix c(a.rows(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    c.col(static_cast<Index>(j)) = a.col(indices[j] - 1);
  }
  return c;
}

ErrorReport report_from_residual(const Matrix& residual, const SvdFactors& f,
                                 Index c, Index k) {
  ErrorReport rep;
  rep.c = c;
  rep.k = k;
  rep.spectral_abs = spectral_norm(residual);
  rep.frobenius_abs = residual.norm();
  const auto [spec_ref, frob_ref] = best_rank_k_errors(f, k);
  rep.spectral_ref = spec_ref;
  rep.frobenius_ref = frob_ref;
  rep.rank_saturated = k >= f.rank;
  if (spec_ref > 0.0) {
    rep.spectral_ratio = rep.spectral_abs / spec_ref;
  }
  if (frob_ref > 0.0) {
    rep.frobenius_ratio = rep.frobenius_abs / frob_ref;
  }
  return rep;
}

} // namespace

ErrorReport error_report(const Matrix& a, const SvdFactors& f,
                         const SelectionResult& selection, Index k) {
  if (k < 1) {
    throw InvalidArgumentError("error_report: k must be positive");
  }
  const IndexList unique = deduplicate(selection.indices, a.cols());
  const Matrix c = columns_at(a, unique);
  const Matrix residual = projection_residual(a, c);
  return report_from_residual(residual, f, selection.c, k);
}

ErrorReport error_report(const Matrix& a, const SelectionResult& selection, Index k) {
  return error_report(a, svd(a), selection, k);
}

double lemma1_certificate(const Matrix& v_k, const SelectionResult& selection) {
  const Index k = v_k.cols();
  if (static_cast<Index>(selection.indices.size()) < k) {
    return 0.0;
  }
  Matrix sampled(k, static_cast<Index>(selection.indices.size()));
  for (std::size_t j = 0; j < selection.indices.size(); ++j) {
    const Index idx = selection.indices[j];
    if (idx < 1 || idx > v_k.rows()) {
      throw InvalidArgumentError("lemma1_certificate: index out of range");
    }
    sampled.col(static_cast<Index>(j)) = v_k.row(idx - 1).transpose();
  }
  Eigen::BDCSVD<Matrix> dec(sampled);
  const double sk = dec.singularValues()(k - 1);
  return sk * sk;
}

bool check_rank_preservation(const Matrix& v_k, const SelectionResult& selection,
                             double tol) {
  const Index k = v_k.cols();
  if (static_cast<Index>(selection.indices.size()) < k) {
    return false;
  }
  Matrix sampled(k, static_cast<Index>(selection.indices.size()));
  for (std::size_t j = 0; j < selection.indices.size(); ++j) {
    sampled.col(static_cast<Index>(j)) = v_k.row(selection.indices[j] - 1).transpose();
  }
  Eigen::BDCSVD<Matrix> dec(sampled);
  const Vector& s = dec.singularValues();
  if (s(0) <= 0.0) {
    return false;
  }
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol * s(0)) {
    ++rank;
  }
  return rank == k;
}

RestrictedRankK restricted_rank_k(const Matrix& a, const SelectionResult& selection,
                                  Index k) {
  const IndexList unique = deduplicate(selection.indices, a.cols());
  if (k < 1 || k > static_cast<Index>(unique.size())) {
    throw InvalidRankError("restricted_rank_k: need 1 <= k <= number of distinct columns");
  }
  const Matrix c = columns_at(a, unique);
  const Matrix q = orthonormal_range(c);

  // Best rank-k truncation of Q^T A, lifted back by Q.
  const Matrix qta = q.transpose() * a;
  Matrix approx;
  if (k >= std::min(qta.rows(), qta.cols())) {
    approx = q * qta;
  } else {
    Eigen::BDCSVD<Matrix> dec(qta, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix truncated = dec.matrixU().leftCols(k) *
                             dec.singularValues().head(k).asDiagonal() *
                             dec.matrixV().leftCols(k).transpose();
    approx = q * truncated;
  }

  RestrictedRankK out;
  out.report = report_from_residual(a - approx, svd(a),
                                    static_cast<Index>(unique.size()), k);
  out.approx = std::move(approx);
  return out;
}

double theorem1_factor(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidEpsilonError("theorem1_factor: epsilon must lie in (0, 1)");
  }
  return 1.0 / (1.0 - epsilon);
}

Index theorem2_column_bound(Index k, double epsilon, double eta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidEpsilonError("theorem2_column_bound: epsilon must lie in (0, 1)");
  }
  if (eta <= 0.0) {
    throw InvalidArgumentError("theorem2_column_bound: eta must be positive");
  }
  if (k < 1) {
    throw InvalidArgumentError("theorem2_column_bound: k must be positive");
  }
  const double kd = static_cast<double>(k);
  const double first = std::pow(2.0 * kd / epsilon, 1.0 / (1.0 + eta)) - 1.0;
  const double second = std::pow(2.0 * kd / (eta * epsilon), 1.0 / eta) - 1.0;
  const double bound = std::max({first, second, kd});
  return static_cast<Index>(std::ceil(bound));
}

BoundReport comparison_counts(Index k, double epsilon, double eta) {
  BoundReport rep;
  rep.epsilon = epsilon;
  rep.eta = eta;
  rep.theorem1_factor = theorem1_factor(epsilon);
  rep.theorem2_c = theorem2_column_bound(k, epsilon, eta);
  const double kd = static_cast<double>(k);
  rep.dmm08_c = static_cast<Index>(std::ceil(kd * std::log(kd) / (epsilon * epsilon)));
  rep.dmm08_c = std::max<Index>(rep.dmm08_c, 1);
  rep.bdm11a_c = std::max<Index>(static_cast<Index>(std::ceil(2.0 * kd / epsilon)), 1);
  return rep;
}

} // namespace cssp
