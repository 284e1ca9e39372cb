#include "cssp/sketch.hpp"

#include "cssp/errors.hpp"
#include "cssp/matrix.hpp"
#include "cssp/rng.hpp"
#include "cssp/synthgen.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace cssp {

namespace {

Matrix thin_q(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), std::min(y.rows(), y.cols()));
}

// Top-k right singular vectors of `b`, padded with orthonormal complement
// columns if b has rank below k, then re-orthonormalized.
Matrix top_k_right(const Matrix& b, Index k) {
  Eigen::BDCSVD<Matrix> dec(b, Eigen::ComputeThinV);
  Matrix z = dec.matrixV().leftCols(std::min<Index>(k, dec.matrixV().cols()));
  if (z.cols() < k) {
    const Matrix comp = complete_basis(z);
    const Index need = k - z.cols();
    Matrix padded(z.rows(), k);
    padded << z, comp.leftCols(need);
    z = padded;
  }
  return thin_q(z);
}

} // namespace

BasisArtifact exact_basis(const Matrix& a, Index k) {
  const SvdFactors f = svd(a);
  if (k < 1 || k > f.rank) {
    throw RankDeficientError("exact_basis: k exceeds the numerical rank " +
                             std::to_string(f.rank));
  }
  BasisArtifact out;
  out.kind = kBasisExact;
  out.z = f.v.leftCols(k);
  return out;
}

BasisArtifact frequent_directions_basis(const Matrix& a, Index k, double epsilon) {
  if (epsilon <= 0.0 || epsilon > 1.0) {
    throw InvalidArgumentError("frequent_directions_basis: epsilon must lie in (0, 1]");
  }
  const Index m = a.rows();
  const Index n = a.cols();
  if (k < 1 || k > std::min(m, n)) {
    throw InvalidArgumentError("frequent_directions_basis: k out of range");
  }

  const Index width = static_cast<Index>(
      std::ceil(static_cast<double>(k) + static_cast<double>(k) / epsilon));
  const Index rows = 2 * width;

  // Insert rows of A into free slots; when the buffer fills, one SVD pass
  // shrinks every direction by the middle singular value, freeing at least
  // half the slots. If A has at most `rows` rows the buffer never fills and
  // the final SVD below is exact.
  Matrix buffer = Matrix::Zero(rows, n);
  Index used = 0;
  for (Index i = 0; i < m; ++i) {
    buffer.row(used++) = a.row(i);
    if (used == rows) {
      Eigen::BDCSVD<Matrix> dec(buffer, Eigen::ComputeThinV);
      const Vector& s = dec.singularValues();
      const double mid2 = s(width - 1) * s(width - 1);
      Vector shrunk = Vector::Zero(s.size());
      for (Index j = 0; j < s.size(); ++j) {
        shrunk(j) = std::sqrt(std::max(0.0, s(j) * s(j) - mid2));
      }
      buffer.setZero();
      used = 0;
      for (Index j = 0; j < s.size() && shrunk(j) > 0.0; ++j) {
        buffer.row(used++) = shrunk(j) * dec.matrixV().col(j).transpose();
      }
    }
  }

  BasisArtifact out;
  out.kind = kBasisFrequentDirections;
  out.epsilon = epsilon;
  out.z = top_k_right(buffer.topRows(std::max<Index>(used, 1)), k);
  return out;
}

BasisArtifact rangefinder_basis(const Matrix& a, Index k, double epsilon,
                                std::uint64_t seed) {
  if (epsilon <= 0.0 || epsilon >= 1.0) {
    throw InvalidArgumentError("rangefinder_basis: epsilon must lie in (0, 1)");
  }
  const Index m = a.rows();
  const Index n = a.cols();
  if (k < 2 || k > std::min(m, n)) {
    throw InvalidArgumentError("rangefinder_basis: k must satisfy 2 <= k <= min(m, n)");
  }

  constexpr Index kOversampling = 10;
  const Index width = std::min(n, k + kOversampling);
  const double dims = static_cast<double>(std::min(m, n)) / static_cast<double>(k);
  const int power_steps = static_cast<int>(
      std::min(20.0, std::ceil(std::log(std::max(dims, 1.0)) / epsilon)));

  Rng rng(seed);
  Matrix g = gaussian_matrix(m, width, rng);
  Matrix q = thin_q(a.transpose() * g);
  for (int step = 0; step < power_steps; ++step) {
    q = thin_q(a.transpose() * (a * q));
  }

  // Project A onto the captured co-range and truncate there.
  const Matrix w = a * q;
  Eigen::BDCSVD<Matrix> dec(w, Eigen::ComputeThinV);
  const Index kk = std::min<Index>(k, dec.matrixV().cols());
  Matrix z = q * dec.matrixV().leftCols(kk);
  if (kk < k) {
    const Matrix comp = complete_basis(z);
    Matrix padded(z.rows(), k);
    padded << z, comp.leftCols(k - kk);
    z = padded;
  }

  BasisArtifact out;
  out.kind = kBasisRangefinder;
  out.epsilon = epsilon;
  out.seed = seed;
  out.z = thin_q(z);
  return out;
}

} // namespace cssp
