#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rotfit/dram.hpp"
#include "rotfit/error.hpp"
#include "rotfit/loss.hpp"
#include "rotfit/rmsd.hpp"
#include "rotfit/simulate.hpp"
#include "test_util.hpp"

using namespace rotfit;
using rotfit::fixtures::Inputs;

namespace {

double max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }

template <class Fn>
void expect_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Cramer's rule oracle: r_ij = det(S with column j replaced by mixed row i) / det S,
// with determinants from Eigen's LU.
MatX cramer_oracle(const MatX& x, const MatX& y) {
  const MatX s = x.transpose() * x;
  const MatX mixed = y.transpose() * x;
  MatX r(mixed.rows(), s.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      MatX rep = s;
      rep.col(j) = mixed.row(i).transpose();
      r(i, j) = rep.determinant() / s.determinant();
    }
  return r;
}

}  // namespace

TEST(CovarianceSums, BasisCloud) {
  const PointCloud basis(MatX(Mat3::Identity()));
  const CovarianceSums s = covariance_sums(basis, TargetCloud(basis.points()));
  EXPECT_EQ(s.self, MatX(Mat3::Identity()));
  EXPECT_EQ(s.mixed, MatX(Mat3::Identity()));
  const CovarianceSums img = covariance_sums(basis, OrthoImage(MatX(basis.points().leftCols(2))));
  EXPECT_EQ(img.mixed.rows(), 2);
}

TEST(CovarianceSums, IdentityRotationAndPsd) {
  const PointCloud cloud = random_cloud(8, 70);
  const CovarianceSums s = covariance_sums(cloud, TargetCloud(cloud.points()));
  EXPECT_EQ(s.mixed, s.self);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<MatX>(s.self).eigenvalues().minCoeff(), 0.0);
  expect_code(ErrorCode::kSizeMismatch, [&] { covariance_sums(cloud, TargetCloud(MatX::Random(7, 3))); });
}

TEST(DramEnp, ExactRecoveryMatchesQmax) {
  for (int i = 0; i < 100; ++i) {
    const SyntheticTrial t = make_trial(71, i, 8, 0.0);
    const DramCandidate c = solve_dram_enp(t.cloud, t.target);
    EXPECT_LT(max_abs(c.matrix - t.rotation.matrix()), 1e-9);
    EXPECT_LT(enp_loss(c.matrix, t.cloud, t.target), 1e-18);
    EXPECT_LT(max_abs(c.matrix - solve_qmax(t.cloud, t.target).rotation.matrix()), 1e-9);
    ASSERT_TRUE(c.denominator.has_value());
    EXPECT_LT(max_abs(c.numerators / *c.denominator - c.matrix), 1e-15);
  }
}

TEST(DramEnp, MatchesCramerOracle) {
  Inputs in(72);
  for (int i = 0; i < 200; ++i) {
    const MatX x = in.cloud(in.integer(4, 20));
    const MatX y = in.matrix(x.rows(), 3);
    const DramCandidate c = solve_dram_enp(PointCloud(x), TargetCloud(y));
    EXPECT_LT(max_abs(c.matrix - cramer_oracle(x, y)), 1e-9);
  }
}

TEST(DramEnp, NoisyCandidateIsDeformedAndUnderBound) {
  for (int i = 0; i < 50; ++i) {
    const SyntheticTrial t = make_trial(73, i, 8, 0.1);
    const DramCandidate c = solve_dram_enp(t.cloud, t.target);
    EXPECT_GT(linalg::orthonormality_defect(c.matrix), 1e-6);
    // Unconstrained least squares can only do better than a rotation.
    EXPECT_LE(enp_loss(c.matrix, t.cloud, t.target), solve_argmin_enp(t.cloud, t.target).loss + 1e-15);
  }
}

TEST(DramEnp, DegenerateClouds) {
  MatX flat = random_cloud(8, 74).points();
  flat.col(2).setZero();
  expect_code(ErrorCode::kDegenerateCloud, [&] { solve_dram_enp(PointCloud(flat), TargetCloud(flat)); });
  MatX line(5, 3);
  for (int k = 0; k < 5; ++k) line.row(k) = (k - 2.0) * Vec3(1, 2, 3).transpose();
  expect_code(ErrorCode::kDegenerateCloud, [&] { solve_dram_enp(PointCloud(line), TargetCloud(line)); });
  const PointCloud three(MatX::Random(3, 3));
  expect_code(ErrorCode::kTooFewPoints, [&] { solve_dram_enp(three, TargetCloud(three.points())); });
}

TEST(DramOnp, ExactRecoveryAndThirdRow) {
  for (int i = 0; i < 100; ++i) {
    const SyntheticTrial t = make_trial(75, i, 8, 0.0);
    const DramCandidate c = solve_dram_onp(t.cloud, t.image);
    ASSERT_EQ(c.matrix.rows(), 3);
    EXPECT_LT(max_abs(c.matrix - t.rotation.matrix()), 1e-9);
    EXPECT_LT(onp_loss(c.matrix, t.cloud, t.image), 1e-18);
    const Vec3 r1 = c.matrix.row(0), r2 = c.matrix.row(1);
    EXPECT_LT((Vec3(c.matrix.row(2)) - r1.cross(r2).normalized()).norm(), 1e-9);
  }
}

TEST(DramOnp, NoisyThirdRowIsUnnormalizedCross) {
  const SyntheticTrial t = make_trial(76, 0, 8, 0.1);
  const DramCandidate c = solve_dram_onp(t.cloud, t.image);
  const Vec3 r1 = c.matrix.row(0), r2 = c.matrix.row(1);
  EXPECT_LT((Vec3(c.matrix.row(2)) - r1.cross(r2)).norm(), 1e-12);
}

TEST(QrAndPinvMaps, ExactRecovery) {
  const SyntheticTrial t = make_trial(77, 0, 8, 0.0);
  EXPECT_LT(max_abs(solve_qr_map(t.cloud, t.target).matrix - t.rotation.matrix()), 1e-9);
  EXPECT_LT(max_abs(solve_pinv_map(t.cloud, t.target).matrix - t.rotation.matrix()), 1e-9);
  const MatX qr23 = solve_qr_map(t.cloud, t.image).matrix;
  ASSERT_EQ(qr23.rows(), 2);
  EXPECT_LT(max_abs(qr23 - t.rotation.matrix().topRows(2)), 1e-9);
  EXPECT_LT(max_abs(solve_pinv_map(t.cloud, t.image).matrix - t.rotation.matrix().topRows(2)), 1e-9);
}

TEST(DramClass, IdentityAcrossNoiseAndSizes) {
  double worst = 0.0;
  int trial = 0;
  for (double sigma : {0.0, 0.05, 0.1, 0.3}) {
    for (int k : {4, 8, 32}) {
      for (int i = 0; i < 42; ++i, ++trial) {
        const SyntheticTrial t = make_trial(78, trial, k, sigma);
        const MatX d = solve_dram_enp(t.cloud, t.target).matrix;
        worst = std::max({worst, max_abs(d - solve_qr_map(t.cloud, t.target).matrix),
                          max_abs(d - solve_pinv_map(t.cloud, t.target).matrix)});
        const MatX o = solve_dram_onp(t.cloud, t.image).matrix;
        worst = std::max({worst, max_abs(o.topRows(2) - solve_qr_map(t.cloud, t.image).matrix),
                          max_abs(o.topRows(2) - solve_pinv_map(t.cloud, t.image).matrix)});
      }
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(DramClass, ScaleCovariance) {
  for (int i = 0; i < 50; ++i) {
    const SyntheticTrial t = make_trial(79, i, 8, 0.1);
    const double lambda = std::pow(10.0, (i % 5) - 2);
    const PointCloud c2(t.cloud.points() * lambda);
    const TargetCloud y2(t.target.points() * lambda);
    const OrthoImage u2(t.image.points() * lambda);
    EXPECT_LT(max_abs(solve_dram_enp(t.cloud, t.target).matrix - solve_dram_enp(c2, y2).matrix), 1e-12);
    EXPECT_LT(max_abs(solve_qr_map(t.cloud, t.target).matrix - solve_qr_map(c2, y2).matrix), 1e-12);
    EXPECT_LT(max_abs(solve_pinv_map(t.cloud, t.target).matrix - solve_pinv_map(c2, y2).matrix), 1e-12);
    EXPECT_LT(max_abs(solve_dram_onp(t.cloud, t.image).matrix - solve_dram_onp(c2, u2).matrix), 1e-12);
  }
}

TEST(DramNd, ThreeDimensionsMatchesEnp) {
  const SyntheticTrial t = make_trial(80, 0, 8, 0.1);
  EXPECT_LT(max_abs(solve_dram_nd(t.cloud, t.target).matrix - solve_dram_enp(t.cloud, t.target).matrix), 1e-12);
  EXPECT_LT(max_abs(solve_dram_nd_ortho(t.cloud, t.image).matrix.topRows(2) -
                    solve_dram_onp(t.cloud, t.image).matrix.topRows(2)),
            1e-12);
  const SyntheticTrial exact = make_trial(80, 1, 8, 0.0);
  EXPECT_LT(max_abs(solve_dram_nd_ortho(exact.cloud, exact.image).matrix -
                    solve_dram_onp(exact.cloud, exact.image).matrix),
            1e-9);
}

TEST(DramNd, PlanarFortyFive) {
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  MatX r(2, 2);
  r << c, -s, s, c;
  MatX x(5, 2);
  x << 0.3, -1.2, 1.1, 0.4, -0.7, 0.9, 0.5, 0.5, -1.2, -0.6;
  x.rowwise() -= x.colwise().mean();
  const DramCandidate d = solve_dram_nd(PointCloud(x), TargetCloud(MatX(x * r.transpose())));
  EXPECT_LT(max_abs(d.matrix - r), 1e-10);
  const DramCandidate o = solve_dram_nd_ortho(PointCloud(x), OrthoImage(MatX(x * r.row(0).transpose())));
  EXPECT_LT(max_abs(o.matrix - r), 1e-10);
}

TEST(DramNd, RandomRotationsAndDeterminantIdentity) {
  Inputs in(81);
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const MatX r = in.rotation(n);
      const MatX x = in.cloud(2 * n + 2, n);
      const DramCandidate d = solve_dram_nd(PointCloud(x), TargetCloud(MatX(x * r.transpose())));
      EXPECT_LT(max_abs(d.matrix - r), 1e-8) << n;
      ASSERT_TRUE(d.denominator);
      const double d0 = *d.denominator;
      EXPECT_LT(max_abs(d.numerators - r * d0) / std::abs(d0), 1e-8) << n;
      const DramCandidate o = solve_dram_nd_ortho(PointCloud(x), OrthoImage(MatX(x * r.topRows(n - 1).transpose())));
      EXPECT_LT(max_abs(o.matrix - r), 1e-8) << n;
      EXPECT_NEAR(o.matrix.determinant(), 1.0, 1e-8);
    }
  }
}

TEST(DramNd, DimensionLimits) {
  expect_code(ErrorCode::kInvalidArgument, [] {
    const MatX x = MatX::Random(20, 9);
    solve_dram_nd(PointCloud(x), TargetCloud(x));
  });
  expect_code(ErrorCode::kTooFewPoints, [] {
    const MatX x = MatX::Random(5, 5);
    solve_dram_nd(PointCloud(x), TargetCloud(x));
  });
}

TEST(GeneralizedCross, MatchesCrossProductAndIsOrthogonal) {
  Inputs in(82);
  const Vec3 a = in.matrix(3, 1), b = in.matrix(3, 1);
  MatX rows(2, 3);
  rows.row(0) = a.transpose();
  rows.row(1) = b.transpose();
  EXPECT_LT((generalized_cross(rows) - a.cross(b)).norm(), 1e-15);
  const MatX r5 = in.matrix(4, 5);
  const VecX c = generalized_cross(r5);
  EXPECT_LT((r5 * c).norm(), 1e-12);
  MatX stacked(5, 5);
  stacked.topRows(4) = r5;
  stacked.row(4) = c.transpose();
  EXPECT_GT(stacked.determinant(), 0.0);
}
