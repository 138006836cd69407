#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace anchorplan {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  TotalReflection,
  InvalidAngle,
  CoincidentPoints,
  DimensionMismatch,
  SingularFim,
  NoCoverage,
  Diverged,
  FitDiverged,
  InsufficientData,
  TooFewAnchors,
  NegativeGap,
  PathOutsideRegion,
  AllInfeasible,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// front ends can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the refraction denominator of a layer is nonpositive.
class TotalReflectionError : public Error {
 public:
  TotalReflectionError(std::size_t layer, const std::string& what)
      : Error(ErrorCode::TotalReflection, what), layer_(layer) {}

  /// One-based layer index i of the offending term.
  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace anchorplan
