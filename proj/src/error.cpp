#include "rotfit/error.hpp"

namespace rotfit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kZeroQuaternion: return "ZeroQuaternion";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kAllColumnsDegenerate: return "AllColumnsDegenerate";
    case ErrorCode::kDegenerateRows: return "DegenerateRows";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kDegenerateCloud: return "DegenerateCloud";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace rotfit
