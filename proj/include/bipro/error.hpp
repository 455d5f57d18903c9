#pragma once

#include <stdexcept>
#include <string>

namespace bipro {

/// Malformed cycle notation, group descriptor or command line.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A configured cap (group order, subgroup count) was exceeded.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical or structural self-check failed (rounding residual too
/// large, pulled-back projection outside the algebra, ...).
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precondition violation: mismatched degrees, models, non-subgroups.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace bipro
