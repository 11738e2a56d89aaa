#include "rotfit/points.hpp"

#include <utility>

#include "rotfit/error.hpp"

namespace rotfit {

template <class Tag>
PointSet<Tag>::PointSet(MatX points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "point set must have at least one point and one coordinate");
  }
  if (!points_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "point set has a non-finite coordinate");
  }
}

template <class Tag>
PointSet<Tag> PointSet<Tag>::centered() const {
  MatX shifted = points_.rowwise() - points_.colwise().mean();
  return PointSet(std::move(shifted));
}

template class PointSet<CloudTag>;
template class PointSet<TargetTag>;
template class PointSet<ImageTag>;

}  // namespace rotfit
