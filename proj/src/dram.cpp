#include "rotfit/dram.hpp"

#include <cmath>

#include "rotfit/error.hpp"

namespace rotfit {

namespace {

void check_shapes(const PointCloud& cloud, Eigen::Index size, Eigen::Index target_dim) {
  if (cloud.size() != size) throw Error(ErrorCode::kSizeMismatch, "reference and target point counts differ");
  if (target_dim != cloud.dim() && target_dim != cloud.dim() - 1) {
    throw Error(ErrorCode::kSizeMismatch, "target dimension does not match the cloud");
  }
}

void check_points(const PointCloud& cloud) {
  if (cloud.size() < 4 || cloud.size() < cloud.dim() + 1) {
    throw Error(ErrorCode::kTooFewPoints, "not enough correspondences for a determinant-ratio solve");
  }
}

CovarianceSums sums(const MatX& x, const MatX& y) {
  return {x.transpose() * x, y.transpose() * x};
}

double checked_denominator(const MatX& self) {
  const double d0 = linalg::det(self);
  const double scale = self.diagonal().prod();
  if (!(std::abs(d0) > kDegenerateCloudRatio * scale)) {
    throw Error(ErrorCode::kDegenerateCloud, "reference cloud is coplanar or collinear");
  }
  return d0;
}

Mat3 rows3(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b,
           const Eigen::Ref<const Eigen::RowVectorXd>& c) {
  Mat3 m;
  m.row(0) = a;
  m.row(1) = b;
  m.row(2) = c;
  return m;
}

// Rows 0..m-1 of the determinant-ratio pattern for 3D clouds.
void fill_enp_rows(const CovarianceSums& s, Eigen::Index rows, Mat3& numerators) {
  const auto r1 = s.self.row(0);  // (xx, xy, xz)
  const auto r2 = s.self.row(1);  // (xy, yy, yz)
  const auto r3 = s.self.row(2);  // (xz, yz, zz)
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto m = s.mixed.row(i);
    numerators(i, 0) = linalg::det3(rows3(r2, r3, m));
    numerators(i, 1) = linalg::det3(rows3(r3, r1, m));
    numerators(i, 2) = linalg::det3(rows3(r1, r2, m));
  }
}

MatX qr_map(const MatX& x, const MatX& y) {
  const linalg::QrResult qr = linalg::qr_decompose(x);
  // Y^T S^T T^-T = (T^-1 (S Y))^T
  const MatX sy = qr.s * y;
  const MatX solved = qr.t.triangularView<Eigen::Upper>().solve(sy);
  return solved.transpose();
}

MatX pinv_map(const MatX& x, const MatX& y) { return (linalg::pseudoinverse(x) * y).transpose(); }

// Cramer-rule rows of the ND pattern for the first `rows` mixed rows.
MatX nd_numerators(const CovarianceSums& s, Eigen::Index rows) {
  const auto n = s.self.rows();
  MatX numerators(rows, n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      MatX replaced = s.self;
      replaced.col(j) = s.mixed.row(i).transpose();
      numerators(i, j) = linalg::det(replaced);
    }
  }
  return numerators;
}

void check_nd(const PointCloud& cloud) {
  if (cloud.dim() < 2 || cloud.dim() > kMaxDramDimension) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be between 2 and 8");
  }
  check_points(cloud);
}

}  // namespace

CovarianceSums covariance_sums(const PointCloud& cloud, const TargetCloud& target) {
  check_shapes(cloud, target.size(), target.dim());
  return sums(cloud.points(), target.points());
}

CovarianceSums covariance_sums(const PointCloud& cloud, const OrthoImage& image) {
  check_shapes(cloud, image.size(), image.dim());
  return sums(cloud.points(), image.points());
}

DramCandidate solve_dram_enp(const PointCloud& cloud, const TargetCloud& target) {
  if (cloud.dim() != 3 || target.dim() != 3) throw Error(ErrorCode::kSizeMismatch, "EnP DRaM needs 3D points");
  const CovarianceSums s = covariance_sums(cloud, target);
  check_points(cloud);
  const double d0 = checked_denominator(s.self);
  Mat3 numerators;
  fill_enp_rows(s, 3, numerators);
  return {numerators / d0, d0, numerators};
}

DramCandidate solve_dram_onp(const PointCloud& cloud, const OrthoImage& image) {
  if (cloud.dim() != 3 || image.dim() != 2) throw Error(ErrorCode::kSizeMismatch, "OnP DRaM needs 3D points and a 2D image");
  const CovarianceSums s = covariance_sums(cloud, image);
  check_points(cloud);
  const double d0 = checked_denominator(s.self);
  Mat3 numerators;
  fill_enp_rows(s, 2, numerators);
  const auto u = s.mixed.row(0);
  const auto v = s.mixed.row(1);
  for (Eigen::Index j = 0; j < 3; ++j) numerators(2, j) = linalg::det3(rows3(s.self.row(j), u, v));
  return {numerators / d0, d0, numerators};
}

DramCandidate solve_qr_map(const PointCloud& cloud, const TargetCloud& target) {
  check_shapes(cloud, target.size(), target.dim());
  check_points(cloud);
  return {qr_map(cloud.points(), target.points()), std::nullopt, {}};
}

DramCandidate solve_qr_map(const PointCloud& cloud, const OrthoImage& image) {
  check_shapes(cloud, image.size(), image.dim());
  check_points(cloud);
  return {qr_map(cloud.points(), image.points()), std::nullopt, {}};
}

DramCandidate solve_pinv_map(const PointCloud& cloud, const TargetCloud& target) {
  check_shapes(cloud, target.size(), target.dim());
  check_points(cloud);
  return {pinv_map(cloud.points(), target.points()), std::nullopt, {}};
}

DramCandidate solve_pinv_map(const PointCloud& cloud, const OrthoImage& image) {
  check_shapes(cloud, image.size(), image.dim());
  check_points(cloud);
  return {pinv_map(cloud.points(), image.points()), std::nullopt, {}};
}

DramCandidate solve_dram_nd(const PointCloud& cloud, const TargetCloud& target) {
  check_nd(cloud);
  if (target.dim() != cloud.dim()) throw Error(ErrorCode::kSizeMismatch, "target dimension does not match the cloud");
  const CovarianceSums s = covariance_sums(cloud, target);
  const double d0 = checked_denominator(s.self);
  if (cloud.dim() == 3) {
    Mat3 numerators;
    fill_enp_rows(s, 3, numerators);
    return {numerators / d0, d0, numerators};
  }
  const MatX numerators = nd_numerators(s, cloud.dim());
  return {numerators / d0, d0, numerators};
}

VecX generalized_cross(const MatX& rows) {
  const auto n = rows.cols();
  if (rows.rows() != n - 1) throw Error(ErrorCode::kSizeMismatch, "generalized cross product needs n-1 rows");
  VecX c(n);
  MatX stacked(n, n);
  stacked.topRows(n - 1) = rows;
  for (Eigen::Index j = 0; j < n; ++j) {
    stacked.row(n - 1) = Eigen::RowVectorXd::Unit(n, j);
    c(j) = linalg::det(stacked);
  }
  return c;
}

DramCandidate solve_dram_nd_ortho(const PointCloud& cloud, const OrthoImage& image) {
  check_nd(cloud);
  if (image.dim() != cloud.dim() - 1) throw Error(ErrorCode::kSizeMismatch, "image must have one dimension fewer than the cloud");
  const CovarianceSums s = covariance_sums(cloud, image);
  const double d0 = checked_denominator(s.self);
  const auto n = cloud.dim();
  const MatX top_numerators = nd_numerators(s, n - 1);
  MatX matrix(n, n);
  matrix.topRows(n - 1) = top_numerators / d0;
  const VecX cross = generalized_cross(matrix.topRows(n - 1));
  if (cross.norm() < 1e-9) throw Error(ErrorCode::kDegenerateRows, "projection rows are linearly dependent");
  matrix.row(n - 1) = cross.normalized().transpose();
  MatX numerators(n, n);
  numerators.topRows(n - 1) = top_numerators;
  numerators.row(n - 1) = matrix.row(n - 1) * d0;
  return {matrix, d0, numerators};
}

}  // namespace rotfit
