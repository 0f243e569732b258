#pragma once

#include <stdexcept>
#include <string>

namespace fsmmint {

struct DeterminismConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DeadStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

struct UnknownSymbolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnquantifiedVariableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverCrashedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoQbfSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationStuckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalNoProgressError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fsmmint
