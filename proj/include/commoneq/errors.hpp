#pragma once

#include <stdexcept>

namespace commoneq {

// The input violates the coprimality hypothesis; the theory does not apply.
// The CLI maps this to exit code 2.
struct NotApplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No witness exists for this input (positive classification). Exit code 3.
struct NoWitnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical self-check failed, which indicates a bug upstream. Exit code 4.
struct InternalCheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace commoneq
