#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vshs {

/// Failure categories raised across the library. The CLI maps `ParseError`
/// and `IoError` to exit status 2 and everything else to exit status 1.
enum class ErrorCode {
  // series
  ZeroConstantTerm,
  NonzeroInnerConstant,
  NotReversible,
  BadConstantTerm,
  NonzeroConstant,
  OrderMismatch,
  // linear algebra
  DimensionMismatch,
  Singular,
  NotNilpotent,
  NotSplit,
  // VSHS
  NotFree,
  InconsistentLift,
  InvalidStructure,
  NotNilpotentResidue,
  NotHodgeTate,
  DegreeViolation,
  NotProportional,
  ZeroKS,
  ResidueNotCompatible,
  PairingNotDetermined,
  NotASquare,
  ZeroScalar,
  NoVolumeForm,
  InvalidDnObject,
  // A-model
  HardLefschetzFailure,
  UnitNotPreserved,
  DegenerateIntersection,
  ZeroVolume,
  // B-model
  NotMaximallyUnipotent,
  MirrorMapMismatch,
  // I/O
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vshs
