#include "rotfit/loss.hpp"

#include "rotfit/error.hpp"

namespace rotfit {

namespace {

// Mean squared residual of p x_k - y_k with a fixed-size map.
template <int Rows>
double mean_residual(const Eigen::Matrix<double, Rows, 3>& p, const MatX& x, const MatX& y) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    const Vec3 xk = x.row(k).transpose();
    const Eigen::Matrix<double, Rows, 1> yk = y.row(k).transpose();
    acc += (p * xk - yk).squaredNorm();
  }
  return acc / static_cast<double>(x.rows());
}

}  // namespace

double enp_loss(const MatX& r, const PointCloud& cloud, const TargetCloud& target) {
  if (cloud.size() != target.size() || cloud.dim() != target.dim() || r.rows() != target.dim() ||
      r.cols() != cloud.dim()) {
    throw Error(ErrorCode::kSizeMismatch, "enp_loss: shapes do not match");
  }
  if (r.rows() == 3 && r.cols() == 3) return mean_residual<3>(r, cloud.points(), target.points());
  const MatX residual = cloud.points() * r.transpose() - target.points();
  return residual.squaredNorm() / static_cast<double>(cloud.size());
}

double onp_loss(const MatX& p, const PointCloud& cloud, const OrthoImage& image) {
  const auto rows = image.dim();
  if (cloud.size() != image.size() || p.cols() != cloud.dim() || p.rows() < rows) {
    throw Error(ErrorCode::kSizeMismatch, "onp_loss: shapes do not match");
  }
  if (rows == 2 && p.cols() == 3) return mean_residual<2>(p.topRows(2), cloud.points(), image.points());
  const MatX residual = cloud.points() * p.topRows(rows).transpose() - image.points();
  return residual.squaredNorm() / static_cast<double>(cloud.size());
}

}  // namespace rotfit
