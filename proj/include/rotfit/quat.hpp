#pragma once

#include "rotfit/linalg.hpp"

namespace rotfit {

/// Unit quaternion (q0, q1, q2, q3) with q0 the scalar part. Always stored
/// normalized with the canonical sign: q0 >= 0, and when q0 == 0 the first
/// nonzero component is positive.
class Quaternion {
 public:
  Quaternion() : q_(1.0, 0.0, 0.0, 0.0) {}

  /// Normalizes and canonicalizes. Throws ZeroQuaternion when |q| < 1e-9.
  explicit Quaternion(const Vec4& q);
  Quaternion(double q0, double q1, double q2, double q3) : Quaternion(Vec4(q0, q1, q2, q3)) {}

  static Quaternion from_axis_angle(const Vec3& axis, double radians);

  const Vec4& coeffs() const { return q_; }
  double operator[](int i) const { return q_(i); }

  /// Hamilton product.
  Quaternion operator*(const Quaternion& rhs) const;

 private:
  Vec4 q_;
};

/// Proper 3D rotation. Construction rejects matrices whose R^T R - I or
/// det R - 1 exceeds 1e-6.
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}
  explicit Rotation3(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  Rotation3 transpose() const { return Rotation3(m_.transpose()); }

 private:
  Mat3 m_;
};

/// First two rows of a rotation; rows orthonormal within 1e-6.
class PartialRotation23 {
 public:
  explicit PartialRotation23(const Mat23& p);

  const Mat23& matrix() const { return p_; }

 private:
  Mat23 p_;
};

/// The quadratic quaternion matrix R(q). Accepts any non-zero 4-vector and
/// renormalizes it first.
Rotation3 quat_to_rot(const Vec4& q);
Rotation3 quat_to_rot(const Quaternion& q);

/// Nearest-rotation quaternion of a (possibly noisy) 3x3 matrix through the
/// maximal eigenvector of the profile matrix of r^T.
Quaternion rot_to_quat(const Mat3& r);
Quaternion rot_to_quat(const Rotation3& r);

/// Outer product q q^T: the ten adjugate variables q_ij = q_i q_j.
Mat4 adjugate_from_quat(const Quaternion& q);

/// Pick the column of a rank-1 adjugate whose diagonal entry has the largest
/// magnitude (lowest index on ties within 1e-12), normalize it, and
/// canonicalize the sign.
Quaternion quat_from_adjugate(const Mat4& a);

/// Rotation angle between two quaternions in degrees, in [0, 180].
double quat_angle_diff(const Quaternion& a, const Quaternion& b);

/// Append the normalized cross product of the two rows.
Rotation3 extend_partial_rotation(const PartialRotation23& p);

/// Profile matrix M(E): symmetric, traceless; its maximal eigenvector is the
/// quaternion of the rotation R maximizing tr(R E).
Mat4 profile_matrix(const Mat3& e);

/// Profile matrix of a 2x3 matrix, equal to profile_matrix of the matrix
/// padded with a zero third row.
Mat4 profile_matrix_23(const Mat23& e);

enum class EigenEnd { kMax, kMin };

struct EigenQuaternion {
  Quaternion q;
  double eigenvalue = 0.0;
};

/// Quaternion eigenvector at one end of the spectrum of a symmetric 4x4,
/// extracted from adjugate(m - lambda I). Throws DegenerateInput when that
/// eigenvalue is repeated (gap below 1e-10 ||m||_F).
EigenQuaternion quaternion_from_eigensystem(const Mat4& m, EigenEnd end);

}  // namespace rotfit
