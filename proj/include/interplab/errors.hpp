#pragma once

#include <stdexcept>

namespace interplab {

// Invalid user input (bad dimensions, out-of-range exponents, malformed
// configs, ...) is reported with std::invalid_argument.

// A computation could not meet its stated accuracy contract (uncontrolled
// tail mass, non-integrable symbol, grid too narrow, ...).
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver exhausted its budget without converging.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An evaluation point collided with a spectrum or another singularity.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested a combination the implementation deliberately does not cover
// (e.g. exact operator norms on l^r fibers with r outside {1,2,inf}).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace interplab
