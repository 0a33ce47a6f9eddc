#pragma once

#include <stdexcept>
#include <string>

namespace hk {

/// Base class of every error thrown by the kernel.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Term evaluation failed (unbound variable, argument outside a table domain, ...).
struct EvalError : Error {
  using Error::Error;
};

/// A term, guard or declaration is not well-sorted.
struct SortError : Error {
  using Error::Error;
};

/// A binding domain is infinite, missing or larger than the configured cap.
struct DomainError : Error {
  using Error::Error;
};

struct CompositionError : Error {
  using Error::Error;
};

/// Firing a transition under a binding that is not enabled.
struct FiringError : Error {
  using Error::Error;
};

struct RunError : Error {
  using Error::Error;
};

}  // namespace hk
