#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rotfit/error.hpp"
#include "rotfit/rmsd.hpp"
#include "rotfit/simulate.hpp"
#include "test_util.hpp"

using namespace rotfit;

TEST(Rng, Deterministic) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs = differs || x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, SubstreamsIgnoreParentState) {
  Rng parent(7);
  const Rng fresh = parent.substream(5);
  for (int i = 0; i < 10; ++i) parent.next_u64();
  Rng late = parent.substream(5);
  Rng early = fresh;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(early.next_u64(), late.next_u64());
  Rng other = Rng(7).substream(6);
  Rng again = Rng(7).substream(5);
  EXPECT_NE(other.next_u64(), again.next_u64());
}

TEST(Rng, UniformRangeAndMoments) {
  Rng rng(1);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum2 / n - mean * mean, 1.0 / 12.0, 0.05 / 12.0);
}

TEST(Rng, GaussianVarianceWithinFivePercent) {
  Rng rng(2);
  const int n = 100000;
  const double sigma = 0.1;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = sigma * rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 4.0 * sigma / std::sqrt(n));
  EXPECT_NEAR((sum2 / n - mean * mean) / (sigma * sigma), 1.0, 0.05);
}

TEST(RandomCloud, DeterministicCenteredAndSized) {
  const PointCloud a = random_cloud(8, 99);
  const PointCloud b = random_cloud(8, 99);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_EQ(a.size(), 8);
  EXPECT_EQ(a.dim(), 3);
  EXPECT_LT(a.points().colwise().mean().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(a.points().cwiseAbs().maxCoeff(), 2.0);
  try {
    random_cloud(3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewPoints);
  }
}

TEST(RandomCloud, AverageRadiusNearOne) {
  double total = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const PointCloud c = random_cloud(8, seed);
    total += c.points().rowwise().norm().sum();
    count += 8;
  }
  const double mean = total / count;
  EXPECT_GE(mean, 0.6);
  EXPECT_LE(mean, 1.3);
}

TEST(RandomQuaternion, ReproducibleUnitAndUnbiased) {
  EXPECT_EQ(random_quaternion(5).coeffs(), random_quaternion(5).coeffs());
  Rng rng(6);
  const int n = 100000;
  Vec4 sum = Vec4::Zero();
  for (int i = 0; i < n; ++i) {
    const Quaternion q = random_quaternion(rng);
    ASSERT_NEAR(q.coeffs().norm(), 1.0, 1e-12);
    // Undo the sign canonicalization to test the uniform sphere sample.
    sum += (rng.uniform() < 0.5 ? 1.0 : -1.0) * q.coeffs();
  }
  const double bound = 4.0 / std::sqrt(4.0 * n);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(sum(i) / n, 0.0, bound);
}

TEST(RandomRotation, SpecialOrthogonal) {
  Rng rng(8);
  for (int n = 2; n <= 6; ++n) {
    const MatX r = random_rotation(n, rng);
    EXPECT_LT((r.transpose() * r - MatX::Identity(n, n)).norm(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(MakeTarget, ExactAndNoisy) {
  const PointCloud cloud = random_cloud(8, 3);
  const Rotation3 r = quat_to_rot(random_quaternion(4));
  const TargetCloud exact = make_target(cloud, r, {0.0, 1});
  EXPECT_EQ(exact.points(), MatX(cloud.points() * r.matrix().transpose()));
  const TargetCloud n1 = make_target(cloud, r, {0.1, 77});
  const TargetCloud n2 = make_target(cloud, r, {0.1, 77});
  EXPECT_EQ(n1.points(), n2.points());
  EXPECT_GT((n1.points() - exact.points()).norm(), 0.0);
}

TEST(MakeOrtho, ExactProjection) {
  const PointCloud cloud = random_cloud(8, 3);
  const OrthoImage id = make_ortho(cloud, Rotation3(), {0.0, 1});
  EXPECT_EQ(id.points(), MatX(cloud.points().leftCols(2)));
  const Rotation3 r = quat_to_rot(random_quaternion(9));
  const OrthoImage img = make_ortho(cloud, r, {0.0, 1});
  EXPECT_EQ(img.dim(), 2);
  EXPECT_LT((img.points() - cloud.points() * r.matrix().topRows(2).transpose()).norm(), 1e-15);
}

TEST(LiftOrtho, ConstantThirdColumn) {
  const OrthoImage img(MatX::Random(5, 2));
  EXPECT_TRUE(lift_ortho_to_plane(img, 0.0).points().col(2).isZero(0));
  EXPECT_TRUE(lift_ortho_to_plane(img).points().col(2).isOnes(0));
  EXPECT_EQ(lift_ortho_to_plane(img).points().leftCols(2), img.points());
}

TEST(MakeTrial, DeterministicAndIndependentOfOrder) {
  const SyntheticTrial a = make_trial(1357, 12, 8, 0.1);
  make_trial(1357, 3, 8, 0.1);
  const SyntheticTrial b = make_trial(1357, 12, 8, 0.1);
  EXPECT_EQ(a.cloud.points(), b.cloud.points());
  EXPECT_EQ(a.target.points(), b.target.points());
  EXPECT_EQ(a.image.points(), b.image.points());
  const SyntheticTrial c = make_trial(1357, 13, 8, 0.1);
  EXPECT_NE(a.cloud.points(), c.cloud.points());
  EXPECT_EQ(a.rotation.matrix(), quat_to_rot(a.truth).matrix());
}

TEST(MakeTrial, NoiseMagnitudes) {
  // ArgMin losses sit near 3 sigma^2 (EnP) and 2 sigma^2 (OnP) less the fitted
  // degrees of freedom; check the order of magnitude.
  double enp = 0.0, onp = 0.0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const SyntheticTrial t = make_trial(2024, i, 8, 0.1);
    enp += solve_svd(t.cloud, t.target).loss;
    onp += solve_argmin_onp(t.cloud, t.image).loss;
  }
  enp /= n;
  onp /= n;
  EXPECT_GT(enp, 0.3 * 3 * 0.01);
  EXPECT_LT(enp, 3 * 0.01);
  EXPECT_GT(onp, 0.3 * 2 * 0.01);
  EXPECT_LT(onp, 2 * 0.01);
}

TEST(MakeTrialNd, ExactRecoveryData) {
  const SyntheticTrialNd t = make_trial_nd(5, 0, 10, 4, 0.0);
  EXPECT_EQ(t.cloud.dim(), 4);
  EXPECT_EQ(t.image.dim(), 3);
  EXPECT_LT((t.target.points() - t.cloud.points() * t.rotation.transpose()).norm(), 1e-15);
}

TEST(PointsCsv, RoundTripIsExact) {
  const PointCloud c = random_cloud(8, 17);
  std::stringstream s;
  write_points_csv(s, c.points(), default_header(3, false));
  EXPECT_EQ(s.str().substr(0, 6), "x,y,z\n");
  const MatX back = read_points_csv(s);
  EXPECT_EQ(back, c.points());
}

TEST(PointsCsv, HeaderOptionalAndErrors) {
  std::stringstream plain("1,2\n3,4\n");
  EXPECT_EQ(read_points_csv(plain), (MatX(2, 2) << 1, 2, 3, 4).finished());
  std::stringstream ragged("u,v\n1,2\n3\n");
  EXPECT_THROW(read_points_csv(ragged), Error);
  std::stringstream junk("u,v\n1,2\nfoo,3\n");
  EXPECT_THROW(read_points_csv(junk), Error);
}

TEST(PointSet, RejectsNonFinite) {
  MatX m = MatX::Zero(4, 3);
  m(1, 1) = std::nan("");
  EXPECT_THROW(PointCloud{m}, Error);
  EXPECT_THROW(PointCloud{MatX(0, 3)}, Error);
}
