#include "rotfit/pose.hpp"

namespace rotfit {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kArgMin: return "argmin";
    case Method::kQmin: return "qmin";
    case Method::kQmax: return "qmax";
    case Method::kSvd: return "svd";
    case Method::kHhn: return "hhn";
    case Method::kDram: return "dram";
    case Method::kQr: return "qr";
    case Method::kPinv: return "pinv";
  }
  return "unknown";
}

std::string_view to_string(Problem p) { return p == Problem::kEnP ? "enp" : "onp"; }

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<Problem> parse_problem(std::string_view name) {
  if (name == "enp") return Problem::kEnP;
  if (name == "onp") return Problem::kOnP;
  return std::nullopt;
}

}  // namespace rotfit
