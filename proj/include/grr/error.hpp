#pragma once

#include <stdexcept>
#include <string>

namespace grr {

/// Base of every exception thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition (r < 1, bad slot index, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// A brute-force search would exceed its configured budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

/// The requested engine cannot handle this input (not a partial-line bundle,
/// incidence degree above two, uncertified Betti numbers, ...).
struct EngineInapplicable : Error {
  using Error::Error;
};

/// Structural data does not describe a well-formed sheaf or morphism.
struct IllFormed : Error {
  using Error::Error;
};

}  // namespace grr
