#pragma once

#include <stdexcept>
#include <string>

namespace kgops {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct SupportOverflow : Error { using Error::Error; };
struct CausalMarginExceeded : Error { using Error::Error; };
struct MassNonPositive : Error { using Error::Error; };
struct CFLViolation : Error { using Error::Error; };
struct UnsupportedLocalization : Error { using Error::Error; };
struct GeometryViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace kgops
