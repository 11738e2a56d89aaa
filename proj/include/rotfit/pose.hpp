#pragma once

#include <optional>
#include <string_view>

#include "rotfit/quat.hpp"

namespace rotfit {

enum class Method { kArgMin, kQmin, kQmax, kSvd, kHhn, kDram, kQr, kPinv };

inline constexpr Method kAllMethods[] = {Method::kArgMin, Method::kQmin, Method::kQmax, Method::kSvd,
                                         Method::kHhn,    Method::kDram, Method::kQr,   Method::kPinv};

enum class Problem { kEnP, kOnP };

std::string_view to_string(Method m);
std::string_view to_string(Problem p);
std::optional<Method> parse_method(std::string_view name);
std::optional<Problem> parse_problem(std::string_view name);

/// The DRaM, QR-map and pseudoinverse-map solvers; exact only on noise-free
/// data.
constexpr bool is_dram_class(Method m) { return m == Method::kDram || m == Method::kQr || m == Method::kPinv; }

struct PoseEstimate {
  Rotation3 rotation;
  Method method = Method::kArgMin;
  double loss = 0.0;
  double orthonormality_defect = 0.0;
  std::optional<double> angle_dev_from_argmin;
  /// False only for ArgMin runs that hit the iteration cap.
  bool converged = true;
};

}  // namespace rotfit
