// Exception taxonomy for the texradon library.
//
// The CLI maps these onto exit statuses: validation problems (band limits,
// bad indices, malformed files, invalid models) exit 2, data/conditioning
// problems exit 3, and numerical regressions (calibration drift, non-finite
// values appearing mid-computation) exit 4.
#pragma once

#include <stdexcept>
#include <string>

namespace texradon {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested band limit exceeds the configured maximum, or is negative.
struct BandLimitError : Error {
  using Error::Error;
};

// Harmonic indices (l, m, n) outside the valid triangle |m|,|n| <= l.
struct IndexError : Error {
  using Error::Error;
};

// Invalid ODF model parameters (unknown kind, negative concentration, ...).
struct ModelError : Error {
  using Error::Error;
};

// Malformed data file; message carries the offending line number.
struct ParseError : Error {
  using Error::Error;
};

// Input data cannot support the requested computation (rank deficiency,
// hopeless conditioning, inconsistent grids).
struct DataError : Error {
  using Error::Error;
};

// A frozen numerical constant no longer matches its measured value.
struct CalibrationError : Error {
  using Error::Error;
};

// Non-finite value produced or encountered mid-computation.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace texradon
