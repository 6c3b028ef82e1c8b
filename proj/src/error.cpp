#include "magnifier/error.hpp"

namespace magnifier {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kEmpty: return "empty";
    case ErrorCode::kAbsent: return "absent";
    case ErrorCode::kAbsentKey: return "absent key";
    case ErrorCode::kNoQueries: return "no queries";
    case ErrorCode::kInsufficientData: return "insufficient data";
    case ErrorCode::kDegenerateEstimate: return "degenerate estimate";
    case ErrorCode::kNotTracked: return "not tracked";
    case ErrorCode::kInfeasibleLayout: return "infeasible layout";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

}  // namespace magnifier
