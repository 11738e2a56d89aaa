#include "rotfit/correct.hpp"

#include <cmath>

#include "rotfit/dram.hpp"
#include "rotfit/error.hpp"
#include "rotfit/quat.hpp"

namespace rotfit {

namespace {

CorrectionReport report(const MatX& candidate, MatX corrected, CorrectionMethod method) {
  CorrectionReport out;
  out.frobenius_distance = (corrected.topRows(candidate.rows()) - candidate).norm();
  out.input_defect = linalg::orthonormality_defect(candidate);
  out.corrected = std::move(corrected);
  out.method = method;
  return out;
}

void check_candidate(const MatX& candidate) {
  if (!candidate.allFinite()) throw Error(ErrorCode::kInvalidArgument, "candidate has non-finite entries");
  const auto n = candidate.cols();
  if (n < 2 || (candidate.rows() != n && candidate.rows() != n - 1)) {
    throw Error(ErrorCode::kSizeMismatch, "candidate must be n x n or (n-1) x n");
  }
}

}  // namespace

std::string_view to_string(CorrectionMethod m) { return m == CorrectionMethod::kSvd ? "svd" : "bar-itzhack"; }

std::optional<CorrectionMethod> parse_correction(std::string_view name) {
  if (name == "svd") return CorrectionMethod::kSvd;
  if (name == "bar-itzhack" || name == "bar_itzhack") return CorrectionMethod::kBarItzhack;
  return std::nullopt;
}

CorrectionReport correct_bar_itzhack(const MatX& candidate) {
  check_candidate(candidate);
  if (candidate.cols() != 3) throw Error(ErrorCode::kSizeMismatch, "quaternion correction needs 3 columns");
  Mat3 r;
  if (candidate.rows() == 3) {
    const Mat3 c = candidate;
    const EigenQuaternion eq = quaternion_from_eigensystem(profile_matrix(c.transpose()), EigenEnd::kMax);
    r = quat_to_rot(eq.q).matrix();
  } else {
    const Mat23 p = candidate;
    if (Vec3(p.row(0)).cross(Vec3(p.row(1))).norm() < 1e-9 * p.squaredNorm()) {
      throw Error(ErrorCode::kDegenerateRows, "candidate rows are parallel");
    }
    const EigenQuaternion eq = quaternion_from_eigensystem(profile_matrix_23(p), EigenEnd::kMax);
    r = quat_to_rot(eq.q).matrix().transpose();
  }
  return report(candidate, r, CorrectionMethod::kBarItzhack);
}

CorrectionReport correct_svd(const MatX& candidate) {
  check_candidate(candidate);
  const auto n = candidate.cols();
  const linalg::SvdResult s = linalg::svd(candidate);
  if (s.s(0) == 0.0 || s.s(s.s.size() - 1) < linalg::kRankTolerance * s.s(0)) {
    throw Error(ErrorCode::kRankDeficient, "candidate does not have full row rank");
  }
  MatX corrected(n, n);
  if (candidate.rows() == n) {
    VecX d = VecX::Ones(n);
    d(n - 1) = std::copysign(1.0, linalg::det(s.u) * linalg::det(s.v));
    corrected = s.u * d.asDiagonal() * s.v.transpose();
  } else {
    MatX d = MatX::Identity(n - 1, n);
    const MatX top = s.u * d * s.v.transpose();
    corrected.topRows(n - 1) = top;
    const VecX cross = generalized_cross(top);
    if (cross.norm() < 1e-9) throw Error(ErrorCode::kDegenerateRows, "corrected rows are dependent");
    corrected.row(n - 1) = cross.normalized().transpose();
  }
  return report(candidate, std::move(corrected), CorrectionMethod::kSvd);
}

CorrectionReport correct(const MatX& candidate, CorrectionMethod method) {
  return method == CorrectionMethod::kSvd ? correct_svd(candidate) : correct_bar_itzhack(candidate);
}

}  // namespace rotfit
