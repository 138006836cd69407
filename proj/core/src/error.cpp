#include "anchorplan/error.hpp"

namespace anchorplan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TotalReflection: return "TotalReflection";
    case ErrorCode::InvalidAngle: return "InvalidAngle";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularFim: return "SingularFim";
    case ErrorCode::NoCoverage: return "NoCoverage";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::TooFewAnchors: return "TooFewAnchors";
    case ErrorCode::NegativeGap: return "NegativeGap";
    case ErrorCode::PathOutsideRegion: return "PathOutsideRegion";
    case ErrorCode::AllInfeasible: return "AllInfeasible";
  }
  return "Unknown";
}

}  // namespace anchorplan
