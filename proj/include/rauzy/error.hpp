#pragma once

#include <stdexcept>
#include <string>

namespace rauzy {

enum class ErrorCode {
  NotNormalized,
  NonPositive,
  TieEncountered,
  PreconditionViolated,
  PointOutsideSupport,
  NonComposablePath,
  OutsideCylinder,
  Hole,
  InvalidArgument,
  BracketTooWide,
  DegenerateCloud,
  NonPositiveInput,
  Io,
};

const char* to_string(ErrorCode code);

// Single exception type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rauzy
