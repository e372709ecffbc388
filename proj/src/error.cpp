#include "qlcod/error.hpp"

namespace qlcod {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::NotHermitian: return "matrix not Hermitian";
    case ErrorCode::Singular: return "singular system";
    case ErrorCode::DimensionLimit: return "dimension limit exceeded";
    case ErrorCode::StabilityBound: return "step size above stability bound";
    case ErrorCode::RegimeViolation: return "parameter regime violation";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Computation: return "computation failed";
  }
  return "unknown error";
}

}  // namespace qlcod
