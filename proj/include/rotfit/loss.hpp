#pragma once

#include "rotfit/points.hpp"

namespace rotfit {

/// Mean squared residual per point, (1/K) sum_k ||r x_k - y_k||^2.
/// Any n x n matrix is accepted, including deformed candidates that are not
/// rotations.
double enp_loss(const MatX& r, const PointCloud& cloud, const TargetCloud& target);

/// (1/K) sum_k ||p x_k - u_k||^2 where p has one row fewer than the cloud
/// dimension. A square matrix is truncated to its top rows first.
double onp_loss(const MatX& p, const PointCloud& cloud, const OrthoImage& image);

}  // namespace rotfit
