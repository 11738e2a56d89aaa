#pragma once

#include <vector>

#include "rotfit/points.hpp"
#include "rotfit/pose.hpp"

namespace rotfit {

/// E = X^T Y, E_ab = sum_k x_ka y_kb.
struct CrossCovariance {
  Mat3 e;
};

CrossCovariance cross_covariance(const PointCloud& cloud, const TargetCloud& target);

/// The 2x3 image cross-covariance (X^T U)^T, entries sum_k u_ka x_kb.
Mat23 cross_covariance_23(const PointCloud& cloud, const OrthoImage& image);

/// Traceless symmetric profile matrix M(E); its maximal eigenvector is the
/// optimal quaternion.
Mat4 build_profile_matrix(const CrossCovariance& e);

/// B = sum_k A_k^T A_k over the per-point antisymmetric A_k; its minimal
/// eigenvector is the optimal quaternion and vanishes for exact data.
Mat4 build_b_matrix(const PointCloud& cloud, const TargetCloud& target);

PoseEstimate solve_qmax(const PointCloud& cloud, const TargetCloud& target);
PoseEstimate solve_qmin(const PointCloud& cloud, const TargetCloud& target);
PoseEstimate solve_svd(const PointCloud& cloud, const TargetCloud& target);

enum class HhnVariant {
  kPlus,   // (E^T E)^(+1/2) E^-1
  kMinus,  // (E^T E)^(-1/2) E^T, no inverse of E needed
};

PoseEstimate solve_hhn(const PointCloud& cloud, const TargetCloud& target, HhnVariant variant = HhnVariant::kMinus);

struct ArgMinOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-12;
  double step_tolerance = 1e-14;
  double function_tolerance = 1e-15;
  /// Starting quaternions; empty means the eight vertices +-e_i.
  std::vector<Vec4> starts;
};

/// Levenberg-Marquardt over the four quaternion components, projected onto
/// the tangent of the unit sphere and renormalized after every step. The
/// best of all starts is returned; `converged` reports whether that start met
/// the tolerances before the iteration cap.
PoseEstimate solve_argmin_enp(const PointCloud& cloud, const TargetCloud& target, const ArgMinOptions& options = {});
PoseEstimate solve_argmin_onp(const PointCloud& cloud, const OrthoImage& image, const ArgMinOptions& options = {});

/// RMSD-class solvers forced onto orthographic data. `method` is one of
/// qmin, qmax, svd, hhn. QMIN lifts the image to the plane z = lift_z.
/// Orthonormal, but not the OnP optimum.
PoseEstimate solve_onp_adapted(const PointCloud& cloud, const OrthoImage& image, Method method,
                               double lift_z = 1.0);

}  // namespace rotfit
