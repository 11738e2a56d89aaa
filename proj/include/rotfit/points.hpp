#pragma once

#include "rotfit/linalg.hpp"

namespace rotfit {

/// K x N array of correspondence points, one point per row. The tag keeps
/// reference clouds, rotated targets and orthographic images apart.
template <class Tag>
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(MatX points);

  const MatX& points() const { return points_; }
  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }

  /// Copy with the center of mass moved to the origin.
  PointSet centered() const;

 private:
  MatX points_;
};

struct CloudTag {};
struct TargetTag {};
struct ImageTag {};

/// Reference model points X.
using PointCloud = PointSet<CloudTag>;
/// Rotated (possibly noisy) target points Y.
using TargetCloud = PointSet<TargetTag>;
/// Orthographic image points U, one dimension fewer than the cloud.
using OrthoImage = PointSet<ImageTag>;

extern template class PointSet<CloudTag>;
extern template class PointSet<TargetTag>;
extern template class PointSet<ImageTag>;

}  // namespace rotfit
