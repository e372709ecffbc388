#pragma once

#include <stdexcept>
#include <string>

namespace qlcod {

// Numeric values are part of the C API (see qlcod.h) and must stay stable.
enum class ErrorCode {
  InvalidArgument = 1,
  Config = 2,
  NotHermitian = 3,
  Singular = 4,
  DimensionLimit = 5,
  StabilityBound = 6,
  RegimeViolation = 7,
  Divergence = 8,
  Io = 9,
  Computation = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

}  // namespace qlcod
