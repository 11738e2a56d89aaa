#include "rotfit/quat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotfit/error.hpp"

namespace rotfit {

namespace {

constexpr double kZeroQuaternionNorm = 1e-9;
constexpr double kDegenerateGap = 1e-10;
// Construction check only; outputs of the solvers sit near 1e-15.
constexpr double kRotationTolerance = 1e-6;

Vec4 canonical(Vec4 q) {
  for (int i = 0; i < 4; ++i) {
    if (q(i) > 0.0) return q;
    if (q(i) < 0.0) return -q;
  }
  return q;
}

}  // namespace

Quaternion::Quaternion(const Vec4& q) {
  const double n = q.norm();
  if (!(n >= kZeroQuaternionNorm)) {
    throw Error(ErrorCode::kZeroQuaternion, "quaternion norm below 1e-9");
  }
  q_ = canonical(q / n);
}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double radians) {
  const Vec3 n = axis.normalized();
  const double s = std::sin(0.5 * radians);
  return Quaternion(std::cos(0.5 * radians), s * n.x(), s * n.y(), s * n.z());
}

Quaternion Quaternion::operator*(const Quaternion& rhs) const {
  const Vec4& a = q_;
  const Vec4& b = rhs.q_;
  return Quaternion(a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3),
                    a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2),
                    a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1),
                    a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0));
}

Rotation3::Rotation3(const Mat3& m) : m_(m) {
  if (!m.allFinite() || (m.transpose() * m - Mat3::Identity()).norm() > kRotationTolerance ||
      std::abs(linalg::det3(m) - 1.0) > kRotationTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not a proper rotation");
  }
}

PartialRotation23::PartialRotation23(const Mat23& p) : p_(p) {
  if (!p.allFinite() || (p * p.transpose() - Eigen::Matrix2d::Identity()).norm() > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "rows are not orthonormal");
  }
}

Rotation3 quat_to_rot(const Vec4& q) {
  const double n = q.norm();
  if (!(n >= kZeroQuaternionNorm)) {
    throw Error(ErrorCode::kZeroQuaternion, "quaternion norm below 1e-9");
  }
  const double q0 = q(0) / n;
  const double q1 = q(1) / n;
  const double q2 = q(2) / n;
  const double q3 = q(3) / n;
  Mat3 r;
  r << q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * q1 * q2 - 2 * q0 * q3, 2 * q0 * q2 + 2 * q1 * q3,
      2 * q1 * q2 + 2 * q0 * q3, q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, -2 * q0 * q1 + 2 * q2 * q3,
      -2 * q0 * q2 + 2 * q1 * q3, 2 * q0 * q1 + 2 * q2 * q3, q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3;
  return Rotation3(r);
}

Rotation3 quat_to_rot(const Quaternion& q) { return quat_to_rot(q.coeffs()); }

Mat4 profile_matrix(const Mat3& e) {
  const double exx = e(0, 0), exy = e(0, 1), exz = e(0, 2);
  const double eyx = e(1, 0), eyy = e(1, 1), eyz = e(1, 2);
  const double ezx = e(2, 0), ezy = e(2, 1), ezz = e(2, 2);
  Mat4 m;
  m << exx + eyy + ezz, eyz - ezy, ezx - exz, exy - eyx,
       eyz - ezy, exx - eyy - ezz, exy + eyx, ezx + exz,
       ezx - exz, exy + eyx, -exx + eyy - ezz, eyz + ezy,
       exy - eyx, ezx + exz, eyz + ezy, -exx - eyy + ezz;
  return m;
}

Mat4 profile_matrix_23(const Mat23& e) {
  const double exx = e(0, 0), exy = e(0, 1), exz = e(0, 2);
  const double eyx = e(1, 0), eyy = e(1, 1), eyz = e(1, 2);
  Mat4 m;
  m << exx + eyy, eyz, -exz, exy - eyx,
       eyz, exx - eyy, exy + eyx, exz,
       -exz, exy + eyx, -exx + eyy, eyz,
       exy - eyx, exz, eyz, -exx - eyy;
  return m;
}

EigenQuaternion quaternion_from_eigensystem(const Mat4& m, EigenEnd end) {
  const linalg::SymEigen4 eig = linalg::sym_eigen4(m);
  const double scale = std::max(m.norm(), 1e-300);
  const double lambda = end == EigenEnd::kMax ? eig.values(0) : eig.values(3);
  const double gap = end == EigenEnd::kMax ? eig.values(0) - eig.values(1) : eig.values(2) - eig.values(3);
  if (gap < kDegenerateGap * scale) {
    throw Error(ErrorCode::kDegenerateInput, "extreme eigenvalue is repeated; quaternion is ambiguous");
  }
  const Mat4 adj = linalg::adjugate4(m - lambda * Mat4::Identity());
  return {quat_from_adjugate(adj), lambda};
}

Quaternion rot_to_quat(const Mat3& r) {
  return quaternion_from_eigensystem(profile_matrix(r.transpose()), EigenEnd::kMax).q;
}

Quaternion rot_to_quat(const Rotation3& r) { return rot_to_quat(r.matrix()); }

Mat4 adjugate_from_quat(const Quaternion& q) { return q.coeffs() * q.coeffs().transpose(); }

Quaternion quat_from_adjugate(const Mat4& a) {
  if (a.colwise().norm().maxCoeff() < 1e-12) {
    throw Error(ErrorCode::kAllColumnsDegenerate, "every adjugate column is (near) zero");
  }
  const Vec4 diag = a.diagonal().cwiseAbs();
  const double best = diag.maxCoeff();
  int pick = 0;
  while (diag(pick) < best - 1e-12) ++pick;
  return Quaternion(Vec4(a.col(pick)));
}

double quat_angle_diff(const Quaternion& a, const Quaternion& b) {
  // 2 acos|a.b| evaluated through the half-chord, which keeps full
  // precision for nearly equal quaternions where acos loses ~1e-8 rad.
  const Vec4 s = a.coeffs().dot(b.coeffs()) < 0.0 ? Vec4(-b.coeffs()) : b.coeffs();
  const double half = std::atan2((a.coeffs() - s).norm(), (a.coeffs() + s).norm());
  return 4.0 * half * 180.0 / std::numbers::pi;
}

Rotation3 extend_partial_rotation(const PartialRotation23& p) {
  const Vec3 r1 = p.matrix().row(0).transpose();
  const Vec3 r2 = p.matrix().row(1).transpose();
  const Vec3 cross = r1.cross(r2);
  if (cross.norm() < 1e-9) {
    throw Error(ErrorCode::kDegenerateRows, "rows are parallel");
  }
  Mat3 r;
  r.row(0) = r1.transpose();
  r.row(1) = r2.transpose();
  r.row(2) = cross.normalized().transpose();
  return Rotation3(r);
}

}  // namespace rotfit
