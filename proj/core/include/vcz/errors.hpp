#pragma once

#include <stdexcept>
#include <string>

namespace vcz {

// Programming/contract errors (bad dimensions, non-finite inputs, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// A goal or stay set collapsed to the empty box during tightening.
struct SpecificationInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No grid cell fits inside a tightened goal set.
struct AbstractGoalEmpty : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// h * u_bar is at least as wide as the grid domain on some axis.
struct DegenerateHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fixed-point game has an empty winning set (or empty goal after pruning).
struct InfeasibleTask : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reachable goal cell of task i is not winning for task i+1.
struct CompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A concrete state quantizes outside the controller's winning domain.
struct OutsideDomain : std::runtime_error {
  OutsideDomain(const std::string& msg, long long cell)
      : std::runtime_error(msg), cell_index(cell) {}
  long long cell_index;
};

// Scenario file failed to parse or validate.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vcz
