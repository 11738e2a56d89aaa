#pragma once

#include <Eigen/Dense>

namespace rotfit {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat23 = Eigen::Matrix<double, 2, 3>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

}  // namespace rotfit

namespace rotfit::linalg {

/// Symmetric eigendecomposition. Eigenvalues descending; column i of
/// `vectors` is the unit eigenvector for `values[i]`, with its largest
/// magnitude component made positive.
struct SymEigen4 {
  Vec4 values;
  Mat4 vectors;
};

struct SymEigen {
  VecX values;
  MatX vectors;
};

/// A = U * diag(S) * V^T with U (p x p) and V (q x q) orthogonal and S of
/// length min(p, q), non-negative and descending.
struct SvdResult {
  MatX u;
  VecX s;
  MatX v;

  MatX reconstruct() const;
};

/// Fixed-size results for the 3x3 and 2x3 shapes the solvers use; same
/// conventions as SvdResult.
struct Svd3 {
  Mat3 u;
  Vec3 s;
  Mat3 v;
};
struct Svd23 {
  Eigen::Matrix2d u;
  Eigen::Vector2d s;
  Mat3 v;
};

/// x = S^T * T with S row-orthonormal (n x K) and T upper triangular with a
/// non-negative diagonal.
struct QrResult {
  MatX s;
  MatX t;
};

enum class PowerKind {
  kSqrt,               // M^(+1/2)
  kInverseSqrt,        // M^(-1/2), throws on (near-)singular input
  kPseudoInverseSqrt,  // (M^+)^(+1/2): tiny eigenvalues map to zero
};

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kSymmetryTolerance = 1e-12;

double det3(const Mat3& m);

/// Determinant by LU with partial pivoting; used beyond 3x3.
double det(const MatX& m);

SymEigen4 sym_eigen4(const Mat4& m);

/// Cyclic Jacobi for any small symmetric matrix (n <= ~16).
SymEigen sym_eigen(const MatX& m);

Mat4 adjugate4(const Mat4& m);

/// One-sided Jacobi SVD for small dense matrices.
SvdResult svd(const MatX& m);

Svd3 svd3(const Mat3& m);
Svd23 svd23(const Mat23& m);

/// Householder QR of a tall K x n matrix with full column rank.
QrResult qr_decompose(const MatX& x);

/// (X^T X)^-1 X^T for a tall matrix with full column rank.
MatX pseudoinverse(const MatX& x);

/// Power of a symmetric positive semi-definite 3x3 matrix through its
/// eigendecomposition.
Mat3 sym_matrix_power(const Mat3& m, PowerKind kind);

/// Ratio of the smallest to the largest singular value (0 for a zero matrix).
double inverse_condition(const MatX& m);

/// Frobenius norm of m^T m - I.
double orthonormality_defect(const MatX& m);

}  // namespace rotfit::linalg
