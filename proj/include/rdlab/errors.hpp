#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

// Base for everything thrown by the library. Verdict failures are *not*
// exceptions; they travel as BoundReport values. Exceptions are reserved
// for broken preconditions, broken inputs, and internal inconsistencies.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested modes/refinement exceed what the grid can represent.
struct ResolutionError : Error {
  using Error::Error;
};

// Two objects built over different domains / time grids were combined.
struct MismatchError : Error {
  using Error::Error;
};

// A mollification scheme cannot be applied to the given data.
struct SchemeError : Error {
  using Error::Error;
};

// A state stopped being finite during time integration.
struct BlowUpError : Error {
  double last_finite_time;
  BlowUpError(const std::string& msg, double t)
      : Error(msg), last_finite_time(t) {}
};

// A check was asked for more samples than the trajectory stores.
struct InsufficientDataError : Error {
  using Error::Error;
};

// An operation refused to run because a prerequisite verdict failed.
struct RefusalError : Error {
  using Error::Error;
};

// Configuration text failed validation; message lists every violation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rdlab
