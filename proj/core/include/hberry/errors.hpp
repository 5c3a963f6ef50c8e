#pragma once

#include <stdexcept>
#include <string>

namespace hberry {

enum class ErrorCode {
  DegenerateDominantEigenvalue,
  NonFinite,
  UnsupportedDimension,
  NotSimplicial,
  UnsupportedDegree,
  DimensionMismatch,
  PredicateNotSimplicial,
  VanishingOverlap,
  NotACycle,
  FluxGuardExceeded,
  EquivarianceViolated,
  NotFixedPoint,
  BadDecomposition,
  NotQuantized,
  DegenerateGroundState,
  NotNormalizable,
  NotInjective,
  NotCanonical,
  NotClose,
  VanishingWilsonLoop,
  GaugeNotBlockDiagonal,
  NotStabilized,
  VanishingNorm,
  NotProportionalToIdentity,
  SchmidtMismatch,
  PreconditionViolated,
  NotFree,
  WrongSector,
  UnknownName,
  SchemaError,
  CanonicalizationFailed,
  MeshMismatch,
  ConfigError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code), detail_(what) {}
  ErrorCode code() const { return code_; }
  // Message without the code name.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hberry
