#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "rotfit/error.hpp"
#include "rotfit/linalg.hpp"
#include "test_util.hpp"

using namespace rotfit;
using namespace rotfit::linalg;
using rotfit::fixtures::Inputs;

namespace {

void expect_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Det3, Examples) {
  EXPECT_EQ(det3(Mat3::Identity()), 1.0);
  Mat3 twin;
  twin << 1, 1, 3, 4, 4, 6, 7, 7, 9;
  EXPECT_EQ(det3(twin), 0.0);
  EXPECT_EQ(det3(Vec3(2, 3, 4).asDiagonal()), 24.0);
}

TEST(Det, MatchesEigenLu) {
  Inputs in(11);
  for (int n = 1; n <= 8; ++n) {
    const MatX m = in.matrix(n, n);
    EXPECT_NEAR(det(m), m.fullPivLu().determinant(), 1e-12 * std::max(1.0, std::abs(m.determinant()))) << n;
  }
}

TEST(SymEigen4, DiagonalAndIdentity) {
  const SymEigen4 d = sym_eigen4(Vec4(1, 3, 2, 4).asDiagonal());
  EXPECT_EQ(d.values, Vec4(4, 3, 2, 1));
  Mat4 axes;
  axes.col(0) = Vec4::Unit(3);
  axes.col(1) = Vec4::Unit(1);
  axes.col(2) = Vec4::Unit(2);
  axes.col(3) = Vec4::Unit(0);
  EXPECT_TRUE(d.vectors.isApprox(axes, 1e-15));

  const SymEigen4 i = sym_eigen4(Mat4::Identity());
  EXPECT_EQ(i.values, Vec4::Ones());
}

TEST(SymEigen4, ResidualAndNormProperty) {
  Inputs in(12);
  for (int trial = 0; trial < 500; ++trial) {
    const MatX a = in.matrix(4, 4, -5, 5);
    const Mat4 m = a + a.transpose();
    const SymEigen4 e = sym_eigen4(m);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(e.vectors.col(i).norm(), 1.0, 1e-12);
      EXPECT_LE((m * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm(), 1e-10 * m.norm());
      if (i > 0) EXPECT_GE(e.values(i - 1), e.values(i));
    }
    const Eigen::SelfAdjointEigenSolver<Mat4> oracle(m);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values(i), oracle.eigenvalues()(3 - i), 1e-12 * m.norm());
  }
}

TEST(SymEigen4, RejectsAsymmetric) {
  Mat4 m = Mat4::Identity();
  m(0, 1) = 1e-6;
  expect_code(ErrorCode::kNotSymmetric, [&] { sym_eigen4(m); });
}

TEST(Adjugate4, Examples) {
  EXPECT_EQ(adjugate4(Mat4::Identity()), Mat4::Identity());
  EXPECT_EQ(adjugate4(Vec4(1, 2, 3, 4).asDiagonal()), Mat4(Vec4(24, 12, 8, 6).asDiagonal()));
}

TEST(Adjugate4, TimesMatrixIsDeterminant) {
  Inputs in(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat4 m = in.matrix(4, 4, -3, 3);
    const Mat4 prod = m * adjugate4(m);
    const double d = m.determinant();
    EXPECT_LE((prod - d * Mat4::Identity()).norm(), 1e-10 * std::max(1.0, m.norm() * m.norm() * m.norm() * m.norm()));
  }
}

TEST(Adjugate4, SingularCharacteristicMatrixColumnsAreEigenvector) {
  Inputs in(14);
  for (int trial = 0; trial < 100; ++trial) {
    const MatX a = in.matrix(4, 4, -2, 2);
    const Mat4 m = a + a.transpose();
    const Eigen::SelfAdjointEigenSolver<Mat4> oracle(m);
    const double lambda = oracle.eigenvalues()(3);
    const Vec4 v = oracle.eigenvectors().col(3);
    const Mat4 adj = adjugate4(m - lambda * Mat4::Identity());
    for (int c = 0; c < 4; ++c) {
      const Vec4 col = adj.col(c);
      if (col.norm() < 1e-6 * adj.norm()) continue;
      const Vec4 u = col.normalized();
      EXPECT_LT(std::min((u - v).norm(), (u + v).norm()), 1e-8);
    }
  }
}

TEST(Svd, Examples) {
  EXPECT_TRUE(svd(Mat3::Identity()).s.isApprox(Vec3::Ones(), 1e-15));
  EXPECT_TRUE(svd(Vec3(3, 2, 1).asDiagonal().toDenseMatrix()).s.isApprox(Vec3(3, 2, 1), 1e-15));
  Mat23 p;
  p << 1, 0, 0, 0, 2, 0;
  const SvdResult r = svd(p);
  ASSERT_EQ(r.s.size(), 2);
  EXPECT_NEAR(r.s(0), 2.0, 1e-15);
  EXPECT_NEAR(r.s(1), 1.0, 1e-15);
}

TEST(Svd, ReconstructionOverRandomMatrices) {
  Inputs in(15);
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = in.integer(1, 3);
    const int cols = in.integer(1, 3);
    const MatX m = in.matrix(rows, cols, -10, 10);
    const SvdResult r = svd(m);
    EXPECT_LE((r.reconstruct() - m).norm(), 1e-10 * m.norm()) << rows << "x" << cols;
    EXPECT_LE((r.u.transpose() * r.u - MatX::Identity(rows, rows)).norm(), 1e-12);
    EXPECT_LE((r.v.transpose() * r.v - MatX::Identity(cols, cols)).norm(), 1e-12);
    const Eigen::JacobiSVD<MatX> oracle(m);
    for (Eigen::Index i = 0; i < r.s.size(); ++i) {
      EXPECT_GE(r.s(i), 0.0);
      if (i > 0) EXPECT_GE(r.s(i - 1), r.s(i));
      EXPECT_NEAR(r.s(i), oracle.singularValues()(i), 1e-12 * m.norm());
    }
  }
}

TEST(Qr, Examples) {
  const QrResult id = qr_decompose(Mat3::Identity());
  EXPECT_TRUE(id.s.isApprox(Mat3::Identity(), 1e-15));
  EXPECT_TRUE(id.t.isApprox(Mat3::Identity(), 1e-15));
  const QrResult two = qr_decompose(2.0 * Mat3::Identity());
  EXPECT_TRUE(two.t.isApprox(2.0 * Mat3::Identity(), 1e-15));
}

TEST(Qr, PostConditionsOverRandomInputs) {
  Inputs in(16);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = in.integer(4, 64);
    const MatX x = in.matrix(k, 3);
    const QrResult qr = qr_decompose(x);
    ASSERT_EQ(qr.s.rows(), 3);
    ASSERT_EQ(qr.s.cols(), k);
    EXPECT_LE((qr.s.transpose() * qr.t - x).norm(), 1e-12 * x.norm());
    EXPECT_LE((qr.s * qr.s.transpose() - Mat3::Identity()).norm(), 1e-12);
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(qr.t(i, i), 0.0);
      for (int j = 0; j < i; ++j) EXPECT_EQ(qr.t(i, j), 0.0);
    }
  }
}

TEST(Qr, RankDeficient) {
  MatX x(5, 3);
  x << 1, 2, 3, 2, 4, 6, 0, 1, 1, 1, 0, 1, 3, 3, 6;  // third column = first + second
  expect_code(ErrorCode::kRankDeficient, [&] { qr_decompose(x); });
}

TEST(Pseudoinverse, Examples) {
  EXPECT_TRUE(pseudoinverse(Mat3::Identity()).isApprox(Mat3::Identity(), 1e-15));
  EXPECT_TRUE(pseudoinverse(2.0 * Mat3::Identity()).isApprox(0.5 * Mat3::Identity(), 1e-15));
}

TEST(Pseudoinverse, LeftInverseOverRandomInputs) {
  Inputs in(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = in.integer(4, 64);
    const MatX x = in.matrix(k, 3);
    const MatX p = pseudoinverse(x);
    EXPECT_LE((p * x - Mat3::Identity()).norm(), 1e-10);
    const MatX oracle = x.completeOrthogonalDecomposition().pseudoInverse();
    EXPECT_LE((p - oracle).norm(), 1e-10 * oracle.norm());
  }
}

TEST(Pseudoinverse, RankDeficient) {
  MatX x(4, 3);
  x << 1, 0, 1, 0, 1, 1, 1, 1, 2, 2, 0, 2;
  expect_code(ErrorCode::kRankDeficient, [&] { pseudoinverse(x); });
}

TEST(SymMatrixPower, Examples) {
  EXPECT_TRUE(sym_matrix_power(Mat3::Identity(), PowerKind::kSqrt).isApprox(Mat3::Identity(), 1e-15));
  const Mat3 m = Vec3(4, 9, 16).asDiagonal();
  EXPECT_TRUE(sym_matrix_power(m, PowerKind::kInverseSqrt).isApprox(Mat3(Vec3(0.5, 1.0 / 3, 0.25).asDiagonal()), 1e-14));
}

TEST(SymMatrixPower, SquareRootSquaresBack) {
  Inputs in(18);
  for (int trial = 0; trial < 500; ++trial) {
    const Mat3 e = in.matrix(3, 3, -2, 2);
    const Mat3 ete = e.transpose() * e;
    const Mat3 r = sym_matrix_power(ete, PowerKind::kSqrt);
    EXPECT_LE((r * r - ete).norm(), 1e-10 * ete.norm());
    const Mat3 ri = sym_matrix_power(ete, PowerKind::kInverseSqrt);
    EXPECT_LE((r * ri - Mat3::Identity()).norm(), 1e-8);
  }
}

TEST(SymMatrixPower, SingularInputs) {
  const Mat3 m = Vec3(1, 1, 0).asDiagonal();
  expect_code(ErrorCode::kSingularMatrix, [&] { sym_matrix_power(m, PowerKind::kInverseSqrt); });
  EXPECT_TRUE(sym_matrix_power(m, PowerKind::kPseudoInverseSqrt).isApprox(m, 1e-15));
}

TEST(OrthonormalityDefect, RotationsAndScaled) {
  Inputs in(19);
  const Mat3 r = in.rotation();
  EXPECT_LT(orthonormality_defect(r), 1e-14);
  EXPECT_NEAR(orthonormality_defect(2.0 * Mat3::Identity()), 3.0 * std::sqrt(3.0), 1e-14);
  EXPECT_LT(orthonormality_defect(MatX(r.topRows(2))), 1e-14);
}
