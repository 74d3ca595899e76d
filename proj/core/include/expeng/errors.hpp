#pragma once

#include <stdexcept>
#include <string>

namespace expeng {

/// Base class for all errors raised by the engine.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A referenced column is missing or a role is bound more than once.
struct SchemaError : Error {
  using Error::Error;
};

/// A cell could not be parsed as the declared type (message cites the row).
struct DataTypeError : Error {
  using Error::Error;
};

/// A value is outside its admissible range (e.g. propensity not in (0,1)).
struct DomainError : Error {
  using Error::Error;
};

/// A frame-level invariant is violated (too few rows, repeated measures
/// without clustering, degenerate assignment, ...).
struct ValidationError : Error {
  using Error::Error;
};

/// A caller broke an operation precondition.
struct ContractError : Error {
  using Error::Error;
};

/// The design or instrument cross-moment matrix is rank deficient.
/// Collinear columns are named in the message; nothing is regularized.
struct RankError : Error {
  using Error::Error;
};

/// Fewer rows than coefficients.
struct InsufficientDataError : Error {
  using Error::Error;
};

/// A prior specification is invalid (e.g. scale not positive definite).
struct PriorError : Error {
  using Error::Error;
};

/// Predicate or graph text failed to parse, or names an unknown entity.
struct ParseError : Error {
  using Error::Error;
};

/// A declared causal graph is structurally invalid (cycle, multiple sinks,
/// mediator off every treatment-outcome path).
struct GraphError : Error {
  using Error::Error;
};

/// An analysis plan fails validation.
struct PlanError : Error {
  using Error::Error;
};

/// A simulation config is infeasible.
struct ConfigError : Error {
  using Error::Error;
};

/// A verification oracle cannot be evaluated on the given data.
struct OracleError : Error {
  using Error::Error;
};

}  // namespace expeng
