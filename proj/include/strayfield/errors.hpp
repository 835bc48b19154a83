#pragma once

#include <stdexcept>
#include <string>

namespace strayfield {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The promise matrix A_s has a zero pivot; the linear system is either
// inconsistent or underdetermined and candidate enumeration is impossible.
struct SingularSystemError : Error {
  using Error::Error;
};

// A measured rate difference is zero, so its logarithm does not exist.
struct DegenerateRateError : Error {
  using Error::Error;
};

// Every enumerated candidate was rejected by the real/physical filters.
struct EmptyCandidateSetError : Error {
  using Error::Error;
};

// Exact integer elimination exceeded the 128-bit intermediate range.
struct OverflowError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

}  // namespace strayfield
