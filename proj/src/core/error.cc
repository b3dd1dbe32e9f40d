#include "mpath/error.h"

#include <fmt/format.h>

namespace mpath {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kDuplicateLink: return "DuplicateLink";
    case ErrorCode::kNonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kInvalidDemand: return "InvalidDemand";
    case ErrorCode::kNoPathExists: return "NoPathExists";
    case ErrorCode::kSaturatedLink: return "SaturatedLink";
    case ErrorCode::kNegativeResidual: return "NegativeResidual";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNonPositiveRate: return "NonPositiveRate";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kWindowTooShort: return "WindowTooShort";
    case ErrorCode::kUnknownTopology: return "UnknownTopology";
    case ErrorCode::kInvalidSink: return "InvalidSink";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kMissingSection: return "MissingSection";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

ParseError::ParseError(ErrorCode code, const std::string& what, int line,
                       int column)
    : Error(code, line > 0 ? fmt::format("{}:{}: {}", line, column, what)
                           : what),
      line_(line),
      column_(column) {}

}  // namespace mpath
