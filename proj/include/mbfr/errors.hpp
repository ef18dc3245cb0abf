#pragma once

#include <stdexcept>
#include <string>

namespace mbfr {

// Malformed or inconsistent input data (bad CSV cell, unknown column, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation could not produce a usable result (e.g. too few usable
// scales for the log-log regression, degenerate target).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mbfr
