#pragma once

#include <stdexcept>

namespace minkloss {

// Bad arguments: dimension mismatches, malformed selection schemes, empty inputs.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A closed form was requested that the math does not provide
// (rank probabilities for order_index > 1).
struct UnsupportedClosedForm : std::logic_error {
  using std::logic_error::logic_error;
};

// A quantity that must be positive (a strong-convexity estimate, a curvature)
// is zero or negative.
struct DegenerateProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace minkloss
