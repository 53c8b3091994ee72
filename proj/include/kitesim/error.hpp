#pragma once

#include <stdexcept>
#include <string>

namespace kitesim {

enum class ErrorKind {
  Domain,
  SingularGeometry,
  DegenerateFlow,
  Stagnation,
  ReelInExhausted,
  SolverFailure,
  FitFailure,
  Unidentifiable,
  UndefinedCorrelation,
  InsufficientData,
  NonEquilibrium,
  Config,
  Io,
  Protocol,
};

const char* to_string(ErrorKind kind);

/// Every failure surfaced by the library carries a kind so callers (CLI,
/// calibration loops) can react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kitesim
