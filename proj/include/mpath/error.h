#pragma once

#include <stdexcept>
#include <string>

namespace mpath {

enum class ErrorCode {
  kDisconnectedGraph,
  kDuplicateLink,
  kNonPositiveCapacity,
  kInvalidGraph,
  kInvalidDemand,
  kNoPathExists,
  kSaturatedLink,
  kNegativeResidual,
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
  kNonPositiveRate,
  kNotConverged,
  kWindowTooShort,
  kUnknownTopology,
  kInvalidSink,
  kInvalidConfig,
  kParseError,
  kUnknownKey,
  kMissingSection,
  kIo,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// line and column are 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace mpath
