#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sutured {

enum class ErrorCode {
  InvalidModel,
  PointOutsideCharts,
  NoFormulaInSmoothingChart,
  DegenerateSaddle,
  DegenerateAreaForm,
  LeftChartDomain,
  StepFailure,
  NewtonDivergence,
  SingularNewtonMatrix,
  NonpositiveDenominator,
  ArcConstructionFailure,
  InconsistentIdentification,
  OrbitCountMismatch,
  ResonantRotation,
  DegenerateIterate,
  FiltrationHypothesisViolated,
  OracleMismatch,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::PointOutsideCharts: return "PointOutsideCharts";
    case ErrorCode::NoFormulaInSmoothingChart: return "NoFormulaInSmoothingChart";
    case ErrorCode::DegenerateSaddle: return "DegenerateSaddle";
    case ErrorCode::DegenerateAreaForm: return "DegenerateAreaForm";
    case ErrorCode::LeftChartDomain: return "LeftChartDomain";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::SingularNewtonMatrix: return "SingularNewtonMatrix";
    case ErrorCode::NonpositiveDenominator: return "NonpositiveDenominator";
    case ErrorCode::ArcConstructionFailure: return "ArcConstructionFailure";
    case ErrorCode::InconsistentIdentification: return "InconsistentIdentification";
    case ErrorCode::OrbitCountMismatch: return "OrbitCountMismatch";
    case ErrorCode::ResonantRotation: return "ResonantRotation";
    case ErrorCode::DegenerateIterate: return "DegenerateIterate";
    case ErrorCode::FiltrationHypothesisViolated: return "FiltrationHypothesisViolated";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a trajectory leaves the chart it was required to stay in.
class LeftChartDomainError : public Error {
 public:
  LeftChartDomainError(double exit_time, const std::string& what)
      : Error(ErrorCode::LeftChartDomain, what + " (exit time " + std::to_string(exit_time) + ")"),
        exit_time_(exit_time) {}

  double exit_time() const noexcept { return exit_time_; }

 private:
  double exit_time_;
};

}  // namespace sutured
