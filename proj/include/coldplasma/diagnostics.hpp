#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coldplasma {

/// Failure categories shared by every solver layer.
enum class ErrorKind {
  EvaluationFailure,    ///< non-finite function values where finite ones are required
  Degeneracy,           ///< step-size underflow, Phi' -> 0, e -> 0, singular coefficients
  NoSolution,           ///< no admissible shooting slope / boundary target unreachable
  NonConvergence,       ///< iteration budget exhausted
  NotFound,             ///< no root inside the search horizon
  Coincident,           ///< identical trajectories, the intersection set is not discrete
  Inapplicable,         ///< operation precondition not met
  DegenerateData,       ///< input data outside the supported regime (e.g. [V]^0 = 0)
  UndefinedCurve,       ///< switching curve denominator vanishes
  DegenerateB,          ///< fan parameter B diverges (half-wave resonance)
  BoundarySingularity,  ///< fan coefficients evaluated on the fan boundary
  Inconsistency,        ///< two routes that must agree disagree beyond tolerance
  ConditionViolated,    ///< regime inequality violated while integrating
  InvalidInput,         ///< malformed settings or configuration
};

std::string_view to_string(ErrorKind kind);

/// A recorded failure with the last valid (t, state) where one exists.
struct Diagnostic {
  ErrorKind kind = ErrorKind::Degeneracy;
  std::string message;
  double t = 0.0;
  std::vector<double> state;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorKind kind, const std::string& what, double t = 0.0,
              std::vector<double> state = {})
      : std::runtime_error(what), kind_(kind), t_(t), state_(std::move(state)) {}

  ErrorKind kind() const noexcept { return kind_; }
  double t() const noexcept { return t_; }
  const std::vector<double>& state() const noexcept { return state_; }

  Diagnostic diagnostic() const { return {kind_, what(), t_, state_}; }

 private:
  ErrorKind kind_;
  double t_;
  std::vector<double> state_;
};

}  // namespace coldplasma
