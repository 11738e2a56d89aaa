#include "rotfit/rmsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotfit/error.hpp"
#include "rotfit/loss.hpp"
#include "rotfit/simulate.hpp"

namespace rotfit {

namespace {

void check_pair(const PointCloud& cloud, Eigen::Index other_size, Eigen::Index other_dim, Eigen::Index min_points) {
  if (cloud.dim() != 3 || cloud.size() != other_size || other_dim < 2 || other_dim > 3) {
    throw Error(ErrorCode::kSizeMismatch, "reference and target shapes do not match");
  }
  if (cloud.size() < min_points) {
    throw Error(ErrorCode::kTooFewPoints, "not enough correspondences");
  }
}

PoseEstimate make_estimate(const Mat3& r, Method method, double loss) {
  PoseEstimate out{Rotation3(r), method, loss, (r.transpose() * r - Mat3::Identity()).norm(), std::nullopt, true};
  return out;
}

PoseEstimate enp_estimate(const Mat3& r, Method method, const PointCloud& cloud, const TargetCloud& target) {
  return make_estimate(r, method, enp_loss(r, cloud, target));
}

PoseEstimate onp_estimate(const Mat3& r, Method method, const PointCloud& cloud, const OrthoImage& image) {
  return make_estimate(r, method, onp_loss(r, cloud, image));
}

// SVD route for a 3x3 cross-covariance: R = V D U^T.
Mat3 svd_rotation(const Mat3& e) {
  const linalg::Svd3 s = linalg::svd3(e);
  Vec3 d(1.0, 1.0, std::copysign(1.0, linalg::det3(s.u) * linalg::det3(s.v)));
  return s.v * d.asDiagonal() * s.u.transpose();
}

Mat3 complete_rows(const Mat23& p) {
  Mat3 r;
  r.topRows<2>() = p;
  const Vec3 cross = Vec3(p.row(0)).cross(Vec3(p.row(1)));
  if (cross.norm() < 1e-9) throw Error(ErrorCode::kDegenerateRows, "partial rotation rows are parallel");
  r.row(2) = cross.normalized().transpose();
  return r;
}

// ---------------------------------------------------------------------------
// ArgMin: Levenberg-Marquardt on the unit quaternion.

struct Residuals {
  VecX r;   // stacked residuals
  MatX j;   // d r / d q, m x 4
};

// Residuals of R(q) x_k - y_k restricted to the first `rows` rows of R(q).
Residuals residuals(const Vec4& q, const MatX& x, const MatX& y, int rows, bool with_jacobian) {
  const Mat3 rot = quat_to_rot(q).matrix();
  const auto k = x.rows();
  Residuals out;
  out.r.resize(k * rows);
  if (with_jacobian) out.j.resize(k * rows, 4);
  const double q0 = q(0);
  const Vec3 v = q.tail<3>();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vec3 p = x.row(i).transpose();
    const Vec3 rp = rot * p;
    for (int a = 0; a < rows; ++a) out.r(i * rows + a) = rp(a) - y(i, a);
    if (!with_jacobian) continue;
    // R(q) p = (q0^2 - |v|^2) p + 2 (v.p) v + 2 q0 (v x p)
    Eigen::Matrix<double, 3, 4> d;
    d.col(0) = 2.0 * q0 * p + 2.0 * v.cross(p);
    const double vp = v.dot(p);
    for (int jj = 0; jj < 3; ++jj) {
      const Vec3 ej = Vec3::Unit(jj);
      d.col(jj + 1) = -2.0 * v(jj) * p + 2.0 * p(jj) * v + 2.0 * vp * ej + 2.0 * q0 * ej.cross(p);
    }
    out.j.middleRows(i * rows, rows) = d.topRows(rows);
  }
  return out;
}

struct LmResult {
  Vec4 q;
  double loss = 0.0;
  bool converged = false;
};

LmResult levenberg_marquardt(Vec4 q, const MatX& x, const MatX& y, int rows, const ArgMinOptions& opt) {
  q.normalize();
  const double inv_k = 1.0 / static_cast<double>(x.rows());
  Residuals cur = residuals(q, x, y, rows, true);
  double f = cur.r.squaredNorm() * inv_k;
  double mu = -1.0;
  bool converged = false;

  for (int it = 0; it < opt.max_iterations; ++it) {
    const Mat4 tangent = Mat4::Identity() - q * q.transpose();
    const MatX jt = cur.j * tangent;
    const Mat4 h = jt.transpose() * jt;
    const Vec4 g = jt.transpose() * cur.r;
    const double grad_norm = 2.0 * inv_k * g.norm();
    if (mu < 0.0) mu = 1e-3 * std::max(h.diagonal().maxCoeff(), 1e-30);

    const Vec4 step = (h + mu * Mat4::Identity()).ldlt().solve(-g);
    if (grad_norm < opt.gradient_tolerance && step.norm() < opt.step_tolerance) {
      converged = true;
      break;
    }
    const Vec4 q_try = (q + step).normalized();
    Residuals trial = residuals(q_try, x, y, rows, true);
    const double f_try = trial.r.squaredNorm() * inv_k;
    if (f_try <= f) {
      const double decrease = f - f_try;
      q = q_try;
      cur = std::move(trial);
      f = f_try;
      mu = std::max(mu / 3.0, 1e-300);
      if (grad_norm < opt.gradient_tolerance && decrease <= opt.function_tolerance * std::max(f, 1.0)) {
        converged = true;
        break;
      }
    } else {
      mu *= 4.0;
      if (mu > 1e30) {
        // No representable decrease remains; accept only if we are already at
        // a stationary point to working precision.
        converged = grad_norm < 1e3 * opt.gradient_tolerance;
        break;
      }
    }
  }
  return {q, f, converged};
}

LmResult multistart(const MatX& x, const MatX& y, int rows, const ArgMinOptions& opt) {
  std::vector<Vec4> starts = opt.starts;
  if (starts.empty()) {
    for (int i = 0; i < 4; ++i) {
      starts.push_back(Vec4::Unit(i));
      starts.push_back(-Vec4::Unit(i));
    }
  }
  LmResult best;
  best.loss = std::numeric_limits<double>::infinity();
  for (const Vec4& s : starts) {
    const LmResult r = levenberg_marquardt(s, x, y, rows, opt);
    if (r.loss < best.loss) best = r;
  }
  return best;
}

}  // namespace

CrossCovariance cross_covariance(const PointCloud& cloud, const TargetCloud& target) {
  check_pair(cloud, target.size(), target.dim(), 1);
  if (target.dim() != 3) throw Error(ErrorCode::kSizeMismatch, "target must be 3D");
  return {cloud.points().transpose() * target.points()};
}

Mat23 cross_covariance_23(const PointCloud& cloud, const OrthoImage& image) {
  check_pair(cloud, image.size(), image.dim(), 1);
  if (image.dim() != 2) throw Error(ErrorCode::kSizeMismatch, "image must be 2D");
  return image.points().transpose() * cloud.points();
}

Mat4 build_profile_matrix(const CrossCovariance& e) { return profile_matrix(e.e); }

Mat4 build_b_matrix(const PointCloud& cloud, const TargetCloud& target) {
  check_pair(cloud, target.size(), target.dim(), 1);
  const MatX& xs = cloud.points();
  const MatX& ys = target.points();
  Mat4 b = Mat4::Zero();
  for (Eigen::Index k = 0; k < xs.rows(); ++k) {
    const double x = xs(k, 0), y = xs(k, 1), z = xs(k, 2);
    const double u = ys(k, 0), v = ys(k, 1), w = ys(k, 2);
    Mat4 a;
    a << 0.0, -x + u, -y + v, -z + w,
         x - u, 0.0, z + w, -y - v,
         y - v, -z - w, 0.0, x + u,
         z - w, y + v, -x - u, 0.0;
    b.noalias() += a.transpose() * a;
  }
  return b;
}

PoseEstimate solve_qmax(const PointCloud& cloud, const TargetCloud& target) {
  const CrossCovariance e = cross_covariance(cloud, target);
  const EigenQuaternion eq = quaternion_from_eigensystem(build_profile_matrix(e), EigenEnd::kMax);
  return enp_estimate(quat_to_rot(eq.q).matrix(), Method::kQmax, cloud, target);
}

PoseEstimate solve_qmin(const PointCloud& cloud, const TargetCloud& target) {
  const Mat4 b = build_b_matrix(cloud, target);
  const EigenQuaternion eq = quaternion_from_eigensystem(b, EigenEnd::kMin);
  return enp_estimate(quat_to_rot(eq.q).matrix(), Method::kQmin, cloud, target);
}

PoseEstimate solve_svd(const PointCloud& cloud, const TargetCloud& target) {
  const CrossCovariance e = cross_covariance(cloud, target);
  return enp_estimate(svd_rotation(e.e), Method::kSvd, cloud, target);
}

PoseEstimate solve_hhn(const PointCloud& cloud, const TargetCloud& target, HhnVariant variant) {
  const Mat3 e = cross_covariance(cloud, target).e;
  const Mat3 ete = e.transpose() * e;
  Mat3 r;
  if (variant == HhnVariant::kPlus) {
    const double scale = std::pow(std::max(e.norm(), 1e-300), 3);
    if (std::abs(linalg::det3(e)) < 1e-12 * scale) {
      throw Error(ErrorCode::kSingularCovariance, "cross-covariance is singular");
    }
    r = linalg::sym_matrix_power(ete, linalg::PowerKind::kSqrt) * e.inverse();
  } else {
    try {
      r = linalg::sym_matrix_power(ete, linalg::PowerKind::kInverseSqrt) * e.transpose();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kSingularMatrix) throw;
      throw Error(ErrorCode::kSingularCovariance, "E^T E is singular");
    }
  }
  if (linalg::det3(r) < 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "cross-covariance has negative determinant; polar factor is a reflection");
  }
  return enp_estimate(r, Method::kHhn, cloud, target);
}

PoseEstimate solve_argmin_enp(const PointCloud& cloud, const TargetCloud& target, const ArgMinOptions& options) {
  check_pair(cloud, target.size(), target.dim(), 3);
  if (target.dim() != 3) throw Error(ErrorCode::kSizeMismatch, "target must be 3D");
  const LmResult best = multistart(cloud.points(), target.points(), 3, options);
  PoseEstimate est = enp_estimate(quat_to_rot(best.q).matrix(), Method::kArgMin, cloud, target);
  est.converged = best.converged;
  return est;
}

PoseEstimate solve_argmin_onp(const PointCloud& cloud, const OrthoImage& image, const ArgMinOptions& options) {
  check_pair(cloud, image.size(), image.dim(), 4);
  if (image.dim() != 2) throw Error(ErrorCode::kSizeMismatch, "image must be 2D");
  const LmResult best = multistart(cloud.points(), image.points(), 2, options);
  PoseEstimate est = onp_estimate(quat_to_rot(best.q).matrix(), Method::kArgMin, cloud, image);
  est.converged = best.converged;
  return est;
}

PoseEstimate solve_onp_adapted(const PointCloud& cloud, const OrthoImage& image, Method method, double lift_z) {
  check_pair(cloud, image.size(), image.dim(), 4);
  if (image.dim() != 2) throw Error(ErrorCode::kSizeMismatch, "image must be 2D");
  Mat3 r;
  switch (method) {
    case Method::kQmin: {
      const Mat4 b = build_b_matrix(cloud, lift_ortho_to_plane(image, lift_z));
      r = quat_to_rot(quaternion_from_eigensystem(b, EigenEnd::kMin).q).matrix();
      break;
    }
    case Method::kQmax: {
      const Mat23 e23 = cross_covariance_23(cloud, image);
      const EigenQuaternion eq = quaternion_from_eigensystem(profile_matrix_23(e23), EigenEnd::kMax);
      r = quat_to_rot(eq.q).matrix().transpose();
      break;
    }
    case Method::kSvd: {
      const Mat23 e23 = cross_covariance_23(cloud, image);
      const linalg::Svd23 s = linalg::svd23(e23);
      Mat23 d = Mat23::Zero();
      d(0, 0) = 1.0;
      d(1, 1) = 1.0;
      r = complete_rows(s.u * d * s.v.transpose());
      break;
    }
    case Method::kHhn: {
      const Mat23 e23 = cross_covariance_23(cloud, image);
      const Mat3 ete = e23.transpose() * e23;
      const Mat3 root = linalg::sym_matrix_power(ete, linalg::PowerKind::kPseudoInverseSqrt);
      r = complete_rows(e23 * root);
      break;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument, "OnP adaptation needs one of qmin, qmax, svd, hhn");
  }
  PoseEstimate est = onp_estimate(r, method, cloud, image);
  return est;
}

}  // namespace rotfit
