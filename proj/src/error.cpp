#include "kitesim/error.hpp"

namespace kitesim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::SingularGeometry: return "singular-geometry";
    case ErrorKind::DegenerateFlow: return "degenerate-flow";
    case ErrorKind::Stagnation: return "stagnation";
    case ErrorKind::ReelInExhausted: return "reel-in-exhausted";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::Unidentifiable: return "unidentifiable";
    case ErrorKind::UndefinedCorrelation: return "undefined-correlation";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::NonEquilibrium: return "non-equilibrium";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Protocol: return "protocol";
  }
  return "unknown";
}

}  // namespace kitesim
