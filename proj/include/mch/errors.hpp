#pragma once

#include <stdexcept>
#include <string>

namespace mch {

/// Base class for all library failures.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid input domain: parameters outside the range an operation covers.
/// The CLI maps these to exit code 2.
struct domain_error : error {
  using error::error;
};

/// A classification could not be decided because two orderings are
/// indistinguishable at the working tolerance.
struct ambiguous_boundary : domain_error {
  using domain_error::domain_error;
};

}  // namespace mch
