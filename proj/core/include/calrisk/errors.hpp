#pragma once

#include <stdexcept>
#include <string>

namespace calrisk {

// Malformed input: bad shapes, out-of-range labels, parse failures.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that cannot proceed numerically (singular systems,
// broken Gram matrices, every prediction dropped).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace calrisk
