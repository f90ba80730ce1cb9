#ifndef TOKENLAB_ERRORS_HPP
#define TOKENLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tokenlab {

// Error categories map onto CLI exit codes:
//   ParameterError (and subclasses) -> 2, IoError -> 3,
//   NumericConsistencyError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Request exceeds an exact-evaluation cap (e.g. brute-force enumerators).
class SizeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// A first-passage law with a point mass where a density is required.
class SingularityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Launch/arrival data admitting no causal assignment.
class InconsistencyError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An internal invariant (e.g. bound ordering) failed; a bug signal,
// never silently clamped.
class NumericConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace tokenlab

#endif  // TOKENLAB_ERRORS_HPP
