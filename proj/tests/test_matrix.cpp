#include "doctest.h"

#include "cssp/errors.hpp"
#include "cssp/matrix.hpp"
#include "cssp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace cssp;

namespace {

Matrix random_matrix(Index m, Index n, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_matrix(m, n, rng);
}

// All c-subsets of {1, ..., n}, lexicographic.
std::vector<IndexList> subsets(Index n, Index c) {
  std::vector<IndexList> out;
  IndexList cur(static_cast<std::size_t>(c));
  const auto rec = [&](auto&& self, Index start, Index depth) -> void {
    if (depth == c) {
      out.push_back(cur);
      return;
    }
    for (Index i = start; i <= n; ++i) {
      cur[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 1, 0);
  return out;
}

Matrix pick_columns(const Matrix& a, const IndexList& idx) {
  Matrix c(a.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    c.col(static_cast<Index>(j)) = a.col(idx[j] - 1);
  }
  return c;
}

} // namespace

TEST_CASE("svd of a diagonal matrix") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 3.0, 2.0, 1.0;
  const SvdFactors f = svd(a);
  REQUIRE(f.rank == 3);
  CHECK(f.sigma(0) == doctest::Approx(3.0));
  CHECK(f.sigma(1) == doctest::Approx(2.0));
  CHECK(f.sigma(2) == doctest::Approx(1.0));
  // U and V are the identity up to column signs.
  CHECK((f.u.cwiseAbs() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f.v.cwiseAbs() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("svd of the identity") {
  const SvdFactors f = svd(Matrix::Identity(4, 4));
  REQUIRE(f.rank == 4);
  for (Index i = 0; i < 4; ++i) {
    CHECK(f.sigma(i) == doctest::Approx(1.0));
  }
}

TEST_CASE("svd reconstruction and factor orthonormality") {
  const Matrix a = random_matrix(5, 3, 11);
  const SvdFactors f = svd(a);
  const double eps_svd = 1e-10 * 5;
  const Matrix recon = f.u * f.sigma.asDiagonal() * f.v.transpose();
  CHECK((a - recon).norm() <= eps_svd * f.sigma(0));
  CHECK((f.u.transpose() * f.u - Matrix::Identity(f.rank, f.rank)).cwiseAbs().maxCoeff() <=
        eps_svd);
  CHECK((f.v.transpose() * f.v - Matrix::Identity(f.rank, f.rank)).cwiseAbs().maxCoeff() <=
        eps_svd);
  CHECK(std::is_sorted(f.sigma.data(), f.sigma.data() + f.rank, std::greater<double>()));
}

TEST_CASE("svd detects rank deficiency") {
  const Matrix base = random_matrix(6, 2, 12);
  Matrix a(6, 4);
  a << base, base; // duplicated block: rank 2
  CHECK(svd(a).rank == 2);
}

TEST_CASE("svd rejects the zero matrix") {
  CHECK_THROWS_AS(svd(Matrix::Zero(3, 4)), ZeroMatrixError);
}

TEST_CASE("best rank-k errors read off the singular value tail") {
  SvdFactors f;
  f.rank = 3;
  f.sigma = Vector(3);
  f.sigma << 3.0, 2.0, 1.0;

  auto [s2, f2] = best_rank_k_errors(f, 2);
  CHECK(s2 == doctest::Approx(1.0));
  CHECK(f2 == doctest::Approx(1.0));

  auto [s3, f3] = best_rank_k_errors(f, 3);
  CHECK(s3 == 0.0);
  CHECK(f3 == 0.0);

  SvdFactors g;
  g.rank = 4;
  g.sigma = Vector(4);
  g.sigma << 5.0, 4.0, 3.0, 2.0;
  auto [s1, f1] = best_rank_k_errors(g, 1);
  CHECK(s1 == doctest::Approx(4.0));
  CHECK(f1 == doctest::Approx(std::sqrt(29.0)));
}

TEST_CASE("pivoted qr orders pivots by column norm") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  const PivotedQr qr = pivoted_qr(a);
  CHECK(qr.perm == IndexList{3, 2, 1});
}

TEST_CASE("pivoted qr pushes a duplicate column to the back") {
  Rng rng(21);
  const Vector v = gaussian_matrix(5, 1, rng).col(0) * 3.0;
  const Vector w = gaussian_matrix(5, 1, rng).col(0);
  Matrix a(5, 3);
  a << v, v, w;
  const PivotedQr qr = pivoted_qr(a);
  // One copy of the duplicate must be pivoted last with a zero diagonal.
  CHECK((qr.perm[2] == 1 || qr.perm[2] == 2));
  CHECK(std::abs(qr.r(2, 2)) <= 1e-12 * std::abs(qr.r(0, 0)));

  Matrix two(4, 2);
  const Vector u = random_matrix(4, 1, 22).col(0);
  two << u, u;
  const PivotedQr qr2 = pivoted_qr(two);
  CHECK(std::abs(qr2.r(1, 1)) <= 1e-12 * std::abs(qr2.r(0, 0)));
}

TEST_CASE("pivoted qr reconstructs the permuted matrix") {
  const Matrix a = random_matrix(6, 4, 31);
  const PivotedQr qr = pivoted_qr(a);
  const Matrix permuted = pick_columns(a, qr.perm);
  CHECK((permuted - qr.q * qr.r).norm() <= 1e-10 * a.norm());
  CHECK((qr.q.transpose() * qr.q - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  for (Index i = 0; i + 1 < 4; ++i) {
    CHECK(std::abs(qr.r(i, i)) >= std::abs(qr.r(i + 1, i + 1)) - 1e-12);
  }
  for (Index i = 1; i < 4; ++i) {
    for (Index j = 0; j < i; ++j) {
      CHECK(qr.r(i, j) == 0.0);
    }
  }
}

TEST_CASE("spectral norm matches the top singular value") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 3.0, 2.0, 1.0;
  CHECK(spectral_norm(a) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(spectral_norm(Matrix::Zero(4, 2)) == 0.0);

  const Matrix b = random_matrix(8, 5, 44);
  const double sigma1 = svd(b).sigma(0);
  CHECK(std::abs(spectral_norm(b) - sigma1) <= 1e-8 * sigma1);
}

TEST_CASE("projection residual basics") {
  const Matrix a = random_matrix(6, 4, 55);
  CHECK(projection_residual(a, a).norm() <= 1e-10 * a.norm());

  const Matrix i3 = Matrix::Identity(3, 3);
  const Matrix residual = projection_residual(i3, i3.col(0));
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 1) = 1.0;
  expected(2, 2) = 1.0;
  CHECK((residual - expected).cwiseAbs().maxCoeff() < 1e-12);

  CHECK((projection_residual(a, Matrix::Zero(6, 2)) - a).norm() == 0.0);
}

TEST_CASE("projection residual ignores duplicate columns") {
  const Matrix a = random_matrix(7, 5, 66);
  const Matrix c = a.leftCols(2);
  Matrix dup(7, 4);
  dup << c, c;
  const Matrix r1 = projection_residual(a, c);
  const Matrix r2 = projection_residual(a, dup);
  CHECK((r1 - r2).norm() <= 1e-10 * a.norm());
}

TEST_CASE("projection residual is orthogonal to the span") {
  const Matrix a = random_matrix(8, 6, 77);
  const Matrix c = a.leftCols(3);
  const Matrix q = orthonormal_range(c);
  const Matrix residual = projection_residual(a, c);
  CHECK((q.transpose() * residual).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("projecting onto a larger subset never increases the residual") {
  const Matrix a = random_matrix(9, 7, 88);
  for (Index c1 = 1; c1 <= 3; ++c1) {
    const Matrix small = a.leftCols(c1);
    const Matrix large = a.leftCols(c1 + 2);
    CHECK(spectral_norm(projection_residual(a, large)) <=
          spectral_norm(projection_residual(a, small)) + 1e-10);
    CHECK(projection_residual(a, large).norm() <=
          projection_residual(a, small).norm() + 1e-10);
  }
}

TEST_CASE("norm chain holds on random instances") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix a = random_matrix(6, 9, 100 + seed);
    const double two = spectral_norm(a);
    const double fro = a.norm();
    const double rank = static_cast<double>(svd(a).rank);
    CHECK(two <= fro + 1e-10);
    CHECK(fro <= std::sqrt(rank) * two + 1e-10);
  }
}

TEST_CASE("svd truncation lower-bounds every k-column projection") {
  // Exhaustive oracle on 5x7 instances with k = 2.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Matrix a = random_matrix(5, 7, 200 + seed);
    const double sigma3 = svd(a).sigma(2); // best rank-2 spectral error
    for (const IndexList& idx : subsets(7, 2)) {
      const double err = spectral_norm(projection_residual(a, pick_columns(a, idx)));
      CHECK(err >= sigma3 - 1e-9);
    }
  }
}
