#include "rauzy/error.hpp"

namespace rauzy {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::TieEncountered: return "TieEncountered";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::PointOutsideSupport: return "PointOutsideSupport";
    case ErrorCode::NonComposablePath: return "NonComposablePath";
    case ErrorCode::OutsideCylinder: return "OutsideCylinder";
    case ErrorCode::Hole: return "Hole";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BracketTooWide: return "BracketTooWide";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace rauzy
