#pragma once

#include <stdexcept>

namespace slke {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable files.
struct IoError : Error {
  using Error::Error;
};

// Malformed CSV content: wrong arity, non-numeric or non-finite cells.
struct ParseError : Error {
  using Error::Error;
};

// Structurally invalid inputs: degenerate data, asymmetric kernels,
// length mismatches, empty tables.
struct DataError : Error {
  using Error::Error;
};

// Numerical breakdown: failed factorizations, non-finite iterates.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace slke
