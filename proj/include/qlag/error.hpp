#pragma once

#include <stdexcept>
#include <string>

namespace qlag {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  OutOfBounds,
  NonImmersion,
  SingularMetric,
  NotNormal,
  DegeneratePlane,
  NotLagrangianDimension,
  MinimalPoint,
  NotHUmbilical,
  ChartSingularity,
  NotExtensor,
  UnknownFamily,
  UnknownSuite,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::OutOfBounds: return "point out of chart bounds";
    case ErrorCode::NonImmersion: return "not an immersion";
    case ErrorCode::SingularMetric: return "singular metric";
    case ErrorCode::NotNormal: return "vector is not normal";
    case ErrorCode::DegeneratePlane: return "degenerate plane";
    case ErrorCode::NotLagrangianDimension: return "dimension cannot be Lagrangian";
    case ErrorCode::MinimalPoint: return "minimal point";
    case ErrorCode::NotHUmbilical: return "not of H-umbilical form";
    case ErrorCode::ChartSingularity: return "coordinate singularity";
    case ErrorCode::NotExtensor: return "not an extensor of the unit hypersphere";
    case ErrorCode::UnknownFamily: return "unknown family";
    case ErrorCode::UnknownSuite: return "unknown suite";
  }
  return "unknown error";
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qlag
