#pragma once

#include <stdexcept>

namespace urllc {

/// Raised when two computations that must agree disagree, or when an
/// iterative method exceeds a hard cap. Signals a bug, not bad input.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace urllc
