#include "rotfit/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rotfit/error.hpp"

namespace rotfit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t engine_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + kGolden));
}

void check_min_points(Eigen::Index k) {
  if (k < 4) throw Error(ErrorCode::kTooFewPoints, "at least four points are required");
}

MatX gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double sigma, Rng& rng) {
  MatX m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = sigma * rng.gaussian();
  return m;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  const char* begin = text.c_str();
  char* end = nullptr;
  value = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(engine_seed(seed, stream)) {}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ (stream_ * kGolden)), index);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

PointCloud random_cloud(Eigen::Index k, Rng& rng, Eigen::Index dim) {
  check_min_points(k);
  MatX pts(k, dim);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) pts(i, j) = rng.uniform(-1.0, 1.0);
  return PointCloud(std::move(pts)).centered();
}

PointCloud random_cloud(Eigen::Index k, std::uint64_t seed, Eigen::Index dim) {
  Rng rng(seed);
  return random_cloud(k, rng, dim);
}

Quaternion random_quaternion(Rng& rng) {
  Vec4 g;
  for (int i = 0; i < 4; ++i) g(i) = rng.gaussian();
  return Quaternion(g);
}

Quaternion random_quaternion(std::uint64_t seed) {
  Rng rng(seed);
  return random_quaternion(rng);
}

MatX random_rotation(Eigen::Index n, Rng& rng) {
  const MatX g = gaussian_matrix(n, n, 1.0, rng);
  const Eigen::HouseholderQR<MatX> qr(g);
  MatX q = qr.householderQ() * MatX::Identity(n, n);
  const MatX r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

TargetCloud make_target(const PointCloud& cloud, const MatX& r, double sigma, Rng& rng) {
  if (r.rows() != cloud.dim() || r.cols() != cloud.dim()) {
    throw Error(ErrorCode::kSizeMismatch, "rotation size does not match cloud dimension");
  }
  MatX y = cloud.points() * r.transpose();
  if (sigma > 0.0) y += gaussian_matrix(y.rows(), y.cols(), sigma, rng);
  return TargetCloud(std::move(y));
}

TargetCloud make_target(const PointCloud& cloud, const Rotation3& r, const NoiseSpec& noise) {
  Rng rng(noise.seed);
  return make_target(cloud, MatX(r.matrix()), noise.sigma, rng);
}

OrthoImage make_ortho(const PointCloud& cloud, const MatX& r, double sigma, Rng& rng) {
  if (r.rows() != cloud.dim() || r.cols() != cloud.dim()) {
    throw Error(ErrorCode::kSizeMismatch, "rotation size does not match cloud dimension");
  }
  const auto n = cloud.dim();
  MatX u = cloud.points() * r.topRows(n - 1).transpose();
  if (sigma > 0.0) u += gaussian_matrix(u.rows(), u.cols(), sigma, rng);
  return OrthoImage(std::move(u));
}

OrthoImage make_ortho(const PointCloud& cloud, const Rotation3& r, const NoiseSpec& noise) {
  Rng rng(noise.seed);
  return make_ortho(cloud, MatX(r.matrix()), noise.sigma, rng);
}

TargetCloud lift_ortho_to_plane(const OrthoImage& img, double z) {
  MatX lifted(img.size(), img.dim() + 1);
  lifted.leftCols(img.dim()) = img.points();
  lifted.col(img.dim()).setConstant(z);
  return TargetCloud(std::move(lifted));
}

SyntheticTrial make_trial(std::uint64_t seed, std::uint64_t trial_id, Eigen::Index k, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be non-negative");
  Rng rng = Rng(seed).substream(trial_id);
  SyntheticTrial t;
  t.seed = seed;
  t.trial_id = trial_id;
  t.sigma = sigma;
  t.cloud = random_cloud(k, rng);
  t.truth = random_quaternion(rng);
  t.rotation = quat_to_rot(t.truth);
  const MatX r = t.rotation.matrix();
  t.target = make_target(t.cloud, r, sigma, rng);
  t.image = make_ortho(t.cloud, r, sigma, rng);
  return t;
}

SyntheticTrialNd make_trial_nd(std::uint64_t seed, std::uint64_t trial_id, Eigen::Index k, Eigen::Index n,
                               double sigma) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be at least 2");
  Rng rng = Rng(seed).substream(trial_id);
  SyntheticTrialNd t;
  t.cloud = random_cloud(k, rng, n);
  t.rotation = random_rotation(n, rng);
  t.target = make_target(t.cloud, t.rotation, sigma, rng);
  t.image = make_ortho(t.cloud, t.rotation, sigma, rng);
  return t;
}

std::vector<std::string> default_header(Eigen::Index columns, bool image) {
  if (!image && columns == 3) return {"x", "y", "z"};
  if (image && columns == 2) return {"u", "v"};
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < columns; ++j) names.push_back((image ? "u" : "x") + std::to_string(j + 1));
  return names;
}

void write_points_csv(std::ostream& out, const MatX& points, const std::vector<std::string>& header) {
  if (static_cast<Eigen::Index>(header.size()) != points.cols()) {
    throw Error(ErrorCode::kSizeMismatch, "CSV header width does not match point dimension");
  }
  for (size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", points(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

MatX read_points_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (size_t j = 0; j < fields.size(); ++j) numeric = numeric && parse_double(fields[j], values[j]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error(ErrorCode::kInvalidArgument, "CSV row is not numeric: " + line);
    }
    first = false;
    if (!rows.empty() && rows.front().size() != values.size()) {
      throw Error(ErrorCode::kSizeMismatch, "CSV rows have different widths");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "CSV has no data rows");
  MatX pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return pts;
}

}  // namespace rotfit
