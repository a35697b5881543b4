#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace andreev {

enum class ErrorCode {
  // complex
  InvalidInput,
  NotTrivalent,
  EdgeNotInTwoFaces,
  FacesMeetTwice,
  FaceTooSmall,
  EulerViolation,
  NotSimple,
  EdgeOnTriangle,
  // angles
  SizeMismatch,
  NotMember,
  // whitehead
  EdgeMissing,
  TargetEdgeExists,
  NotFlankedByTwoTriangles,
  IsPrism,
  TooSmall,
  InternalInvariantBroken,
  // minkowski
  NotIntersecting,
  OutOfRange,
  NoFiniteVertex,
  NoCommonPoint,
  IdealPoint,
  CommonPoint,
  BadParameters,
  NonCompact,
  DegenerateFace,
  // realize
  Diverged,
  WrongCombinatorics,
  SingularJacobian,
  StepFloorReached,
  EventDetected,
  DeltaSearchFailed,
  NoEssentialCircuits,
  IncongruentTriangles,
  IsometrySolveFailed,
  InfeasibleAngles,
  Unsupported,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotTrivalent: return "NotTrivalent";
    case ErrorCode::EdgeNotInTwoFaces: return "EdgeNotInTwoFaces";
    case ErrorCode::FacesMeetTwice: return "FacesMeetTwice";
    case ErrorCode::FaceTooSmall: return "FaceTooSmall";
    case ErrorCode::EulerViolation: return "EulerViolation";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::EdgeOnTriangle: return "EdgeOnTriangle";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::EdgeMissing: return "EdgeMissing";
    case ErrorCode::TargetEdgeExists: return "TargetEdgeExists";
    case ErrorCode::NotFlankedByTwoTriangles: return "NotFlankedByTwoTriangles";
    case ErrorCode::IsPrism: return "IsPrism";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InternalInvariantBroken: return "InternalInvariantBroken";
    case ErrorCode::NotIntersecting: return "NotIntersecting";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoFiniteVertex: return "NoFiniteVertex";
    case ErrorCode::NoCommonPoint: return "NoCommonPoint";
    case ErrorCode::IdealPoint: return "IdealPoint";
    case ErrorCode::CommonPoint: return "CommonPoint";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::NonCompact: return "NonCompact";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::WrongCombinatorics: return "WrongCombinatorics";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::StepFloorReached: return "StepFloorReached";
    case ErrorCode::EventDetected: return "EventDetected";
    case ErrorCode::DeltaSearchFailed: return "DeltaSearchFailed";
    case ErrorCode::NoEssentialCircuits: return "NoEssentialCircuits";
    case ErrorCode::IncongruentTriangles: return "IncongruentTriangles";
    case ErrorCode::IsometrySolveFailed: return "IsometrySolveFailed";
    case ErrorCode::InfeasibleAngles: return "InfeasibleAngles";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace andreev
