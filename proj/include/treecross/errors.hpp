#pragma once

#include <stdexcept>

namespace treecross {

// Raised when an argument falls outside a documented size guard
// (enumeration limits, minimum n). Malformed inputs use std::invalid_argument.
class GuardError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// An internal consistency check failed, or a sampler hit its retry cap.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace treecross
