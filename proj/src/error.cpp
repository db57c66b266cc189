#include "squashkit/error.hpp"

namespace squashkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotCyclic: return "NotCyclic";
    case ErrorCode::KNotOne: return "KNotOne";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::InvalidSector: return "InvalidSector";
    case ErrorCode::SymmetryViolated: return "SymmetryViolated";
    case ErrorCode::RankNotTwo: return "RankNotTwo";
    case ErrorCode::SpectrumAsymmetric: return "SpectrumAsymmetric";
    case ErrorCode::DeficiencyNotPsd: return "DeficiencyNotPsd";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::TildeNotVerified: return "TildeNotVerified";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace squashkit
