#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "rotfit/points.hpp"
#include "rotfit/quat.hpp"

namespace rotfit {

/// Seedable generator with order-independent substreams.
///
/// The engine is std::mt19937_64 seeded with one 64-bit word:
///   splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15)).
/// Uniforms take the top 53 bits of one engine output. Gaussians use the
/// Box-Muller transform on two uniforms (u1 = 1 - uniform()), returning the
/// cosine branch and caching the sine branch for the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent generator for `index`, derived from this generator's seed
  /// and stream, not from its current state.
  Rng substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr double kDefaultOrthoLift = 1.0;

/// k points uniform in [-1, 1]^dim, then recentered.
PointCloud random_cloud(Eigen::Index k, std::uint64_t seed, Eigen::Index dim = 3);
PointCloud random_cloud(Eigen::Index k, Rng& rng, Eigen::Index dim = 3);

/// Uniform on S^3: four standard Gaussians, normalized, sign-canonical.
Quaternion random_quaternion(std::uint64_t seed);
Quaternion random_quaternion(Rng& rng);

/// Haar-random element of SO(n) from the QR factorization of a Gaussian
/// matrix, with det fixed to +1.
MatX random_rotation(Eigen::Index n, Rng& rng);

/// y_k = R x_k + eps_k, eps ~ N(0, sigma^2) per coordinate.
TargetCloud make_target(const PointCloud& cloud, const Rotation3& r, const NoiseSpec& noise);
TargetCloud make_target(const PointCloud& cloud, const MatX& r, double sigma, Rng& rng);

/// u_k = (top n-1 rows of R) x_k + eps_k.
OrthoImage make_ortho(const PointCloud& cloud, const Rotation3& r, const NoiseSpec& noise);
OrthoImage make_ortho(const PointCloud& cloud, const MatX& r, double sigma, Rng& rng);

/// Append a constant coordinate z to every image point.
TargetCloud lift_ortho_to_plane(const OrthoImage& img, double z = kDefaultOrthoLift);

/// One synthetic correspondence problem. Draw order from the trial's
/// substream: cloud (3K uniforms), quaternion (4 Gaussians), target noise
/// (3K Gaussians), image noise (2K Gaussians).
struct SyntheticTrial {
  std::uint64_t seed = 0;
  std::uint64_t trial_id = 0;
  double sigma = 0.0;
  PointCloud cloud;
  Quaternion truth;
  Rotation3 rotation;
  TargetCloud target;
  OrthoImage image;
};

SyntheticTrial make_trial(std::uint64_t seed, std::uint64_t trial_id, Eigen::Index k, double sigma);

/// ND variant: cloud K x n, Haar rotation in SO(n), exact or noisy target and
/// (n-1)-dimensional image.
struct SyntheticTrialNd {
  PointCloud cloud;
  MatX rotation;
  TargetCloud target;
  OrthoImage image;
};

SyntheticTrialNd make_trial_nd(std::uint64_t seed, std::uint64_t trial_id, Eigen::Index k, Eigen::Index n,
                               double sigma);

/// CSV with a header row and 17 significant digits per value.
void write_points_csv(std::ostream& out, const MatX& points, const std::vector<std::string>& header);
MatX read_points_csv(std::istream& in);

std::vector<std::string> default_header(Eigen::Index columns, bool image);

}  // namespace rotfit
