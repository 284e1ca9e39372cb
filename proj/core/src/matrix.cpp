#include "cssp/matrix.hpp"

#include "cssp/errors.hpp"
#include "cssp/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cssp {

namespace {

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw InvalidArgumentError(std::string(who) + ": matrix has NaN or Inf entries");
  }
}

} // namespace

SvdFactors svd(const Matrix& a) {
  require_finite(a, "svd");
  if (a.size() == 0 || a.isZero(0.0)) {
    throw ZeroMatrixError("svd: input matrix is identically zero");
  }
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = dec.singularValues();
  const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) *
                        std::numeric_limits<double>::epsilon() * s(0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) {
    ++rank;
  }
  SvdFactors f;
  f.rank = rank;
  f.u = dec.matrixU().leftCols(rank);
  f.sigma = s.head(rank);
  f.v = dec.matrixV().leftCols(rank);
  return f;
}

std::pair<double, double> best_rank_k_errors(const SvdFactors& f, Index k) {
  if (k < 1) {
    throw InvalidArgumentError("best_rank_k_errors: k must be positive");
  }
  if (k >= f.rank) {
    return {0.0, 0.0};
  }
  const double spectral = f.sigma(k);
  double tail = 0.0;
  for (Index i = k; i < f.rank; ++i) {
    tail += f.sigma(i) * f.sigma(i);
  }
  return {spectral, std::sqrt(tail)};
}

PivotedQr pivoted_qr(const Matrix& a) {
  require_finite(a, "pivoted_qr");
  if (a.size() == 0 || a.isZero(0.0)) {
    throw ZeroMatrixError("pivoted_qr: input matrix is identically zero");
  }
  const Index m = a.rows();
  const Index n = a.cols();
  const Index rmin = std::min(m, n);
  Eigen::ColPivHouseholderQR<Matrix> dec(a);
  PivotedQr out;
  out.q = dec.householderQ() * Matrix::Identity(m, rmin);
  out.r = dec.matrixQR().topRows(rmin).triangularView<Eigen::Upper>();
  const auto& p = dec.colsPermutation().indices();
  out.perm.resize(n);
  for (Index j = 0; j < n; ++j) {
    out.perm[static_cast<std::size_t>(j)] = static_cast<Index>(p(j)) + 1;
  }
  return out;
}

double spectral_norm(const Matrix& a) {
  require_finite(a, "spectral_norm");
  if (a.size() == 0 || a.isZero(0.0)) {
    return 0.0;
  }
  // Fixed-seed start vector keeps the estimate reproducible; a restart with a
  // fresh vector covers the measure-zero case of starting orthogonal to the
  // leading singular subspace.
  constexpr int kMaxIter = 20000;
  constexpr double kRelTol = 1e-12;
  for (std::uint64_t attempt = 0; attempt < 4; ++attempt) {
    Rng rng(0xC0FFEEULL + attempt);
    Vector x = gaussian_matrix(a.cols(), 1, rng).col(0);
    x.normalize();
    double prev = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
      Vector y = a * x;
      const double est = y.norm();
      if (est == 0.0) {
        break; // x fell in the null space; retry with a new start
      }
      x = a.transpose() * y;
      const double xn = x.norm();
      if (xn == 0.0) {
        break;
      }
      x /= xn;
      if (it > 0 && std::abs(est - prev) <= kRelTol * est) {
        return est;
      }
      prev = est;
    }
    if (prev > 0.0) {
      return prev;
    }
  }
  return 0.0;
}

Matrix orthonormal_range(const Matrix& c) {
  require_finite(c, "orthonormal_range");
  const Index m = c.rows();
  if (c.cols() == 0 || c.isZero(0.0)) {
    return Matrix(m, 0);
  }
  Eigen::ColPivHouseholderQR<Matrix> dec(c);
  const Matrix& qr = dec.matrixQR();
  const Index rmin = std::min(m, c.cols());
  const double drop = 1e-12 * std::abs(qr(0, 0)); // |R_00| = largest column norm
  Index rank = 0;
  while (rank < rmin && std::abs(qr(rank, rank)) > drop) {
    ++rank;
  }
  return dec.householderQ() * Matrix::Identity(m, rank);
}

Matrix projection_residual(const Matrix& a, const Matrix& c) {
  require_finite(a, "projection_residual");
  if (c.rows() != a.rows()) {
    throw InvalidArgumentError("projection_residual: row counts of A and C differ");
  }
  const Matrix q = orthonormal_range(c);
  if (q.cols() == 0) {
    return a;
  }
  Matrix res = a - q * (q.transpose() * a);
  res -= q * (q.transpose() * res); // second pass scrubs the residual overlap
  return res;
}

} // namespace cssp
