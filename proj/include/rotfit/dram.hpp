#pragma once

#include <optional>

#include "rotfit/points.hpp"

namespace rotfit {

/// Second-moment sums of a reference cloud and its target.
///   self(a, b)  = sum_k x_ka x_kb   (xx, xy, xz, yy, yz, zz)
///   mixed(i, b) = sum_k y_ki x_kb   (ux, uy, uz, vx, ..., wz)
/// `mixed` has one row per target coordinate: three for a 3D target, two
/// for an orthographic image.
struct CovarianceSums {
  MatX self;
  MatX mixed;
};

/// A DRaM-class pose candidate. It is a rotation only for exact data; with
/// noise it is deformed and must be corrected before use as a rotation.
struct DramCandidate {
  /// 3x3 for EnP and DRaM OnP, 2x3 for QR/PINV OnP, n x n for ND.
  MatX matrix;
  /// d0 = det(self); absent for the QR and pseudoinverse maps.
  std::optional<double> denominator;
  /// d_ij with matrix = numerators / d0; empty for the QR and pseudoinverse maps.
  MatX numerators;
};

inline constexpr Eigen::Index kMaxDramDimension = 8;
inline constexpr double kDegenerateCloudRatio = 1e-12;

CovarianceSums covariance_sums(const PointCloud& cloud, const TargetCloud& target);
CovarianceSums covariance_sums(const PointCloud& cloud, const OrthoImage& image);

/// Determinant-ratio matrix for 3D targets: r_ij = d_ij / d0.
DramCandidate solve_dram_enp(const PointCloud& cloud, const TargetCloud& target);

/// Determinant-ratio matrix for orthographic images. The first two rows
/// follow the EnP pattern with u, v sums; the third row comes from the
/// determinants of (self row, u sums, v sums).
DramCandidate solve_dram_onp(const PointCloud& cloud, const OrthoImage& image);

/// R = Y^T S^T T^-T from the QR factorization X = S^T T.
DramCandidate solve_qr_map(const PointCloud& cloud, const TargetCloud& target);
DramCandidate solve_qr_map(const PointCloud& cloud, const OrthoImage& image);

/// R = (X^+ Y)^T.
DramCandidate solve_pinv_map(const PointCloud& cloud, const TargetCloud& target);
DramCandidate solve_pinv_map(const PointCloud& cloud, const OrthoImage& image);

/// n-dimensional determinant-ratio matrix. Entry (i, j) is det(self with
/// column j replaced by the i-th mixed row) / det(self). 2 <= n <= 8.
DramCandidate solve_dram_nd(const PointCloud& cloud, const TargetCloud& target);

/// n-dimensional OnP: n-1 rows by determinant ratios, last row the
/// normalized generalized cross product of those rows (det = +1).
DramCandidate solve_dram_nd_ortho(const PointCloud& cloud, const OrthoImage& image);

/// Generalized cross product of n-1 rows in R^n: component j is the
/// determinant of the rows stacked over e_j.
VecX generalized_cross(const MatX& rows);

}  // namespace rotfit
