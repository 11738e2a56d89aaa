#pragma once

#include <optional>
#include <string_view>

#include "rotfit/linalg.hpp"

namespace rotfit {

enum class CorrectionMethod { kSvd, kBarItzhack };

std::string_view to_string(CorrectionMethod m);
std::optional<CorrectionMethod> parse_correction(std::string_view name);

/// Candidates are passed in the orientation the solvers emit them (rows map
/// reference coordinates to target coordinates); any transposing is internal.
struct CorrectionReport {
  /// Full n x n proper rotation, also for (n-1) x n inputs.
  MatX corrected;
  CorrectionMethod method = CorrectionMethod::kSvd;
  /// Frobenius distance between the candidate and the matching rows of
  /// `corrected`.
  double frobenius_distance = 0.0;
  /// Orthonormality defect of the candidate rows.
  double input_defect = 0.0;
};

/// Quaternion eigenvector route for 3x3 and 2x3 candidates.
CorrectionReport correct_bar_itzhack(const MatX& candidate);

/// Polar-factor route for n x n or (n-1) x n candidates. Square inputs get
/// U diag(1, ..., 1, sign(det U det V)) V^T; rectangular inputs get U [I 0] V^T
/// followed by the generalized cross product as last row.
CorrectionReport correct_svd(const MatX& candidate);

CorrectionReport correct(const MatX& candidate, CorrectionMethod method);

}  // namespace rotfit
