#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypgeo {

enum class ErrorKind {
  EllipticOrParabolic,
  DegenerateConfiguration,
  NotFactorable,
  RelatorViolation,
  NotTransitive,
  RejectionBudgetExceeded,
  NoGeodesicInRange,
  BudgetExceeded,
  ToleranceCollision,
  BandExceedsCensus,
  BallTooSmall,
  DegenerateCrossing,
  NonTransverseInput,
  ChartRadiusExceeded,
  PackingFailure,
  Disconnected,
  ConfigError,
  InvariantViolation,
};

std::string_view error_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hypgeo
