#pragma once

#include <stdexcept>
#include <string>

namespace typoscope {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (CoNLL-U, model files, TSVs).
struct ParseError : Error {
  using Error::Error;
};

// Well-formed input that violates a structural or semantic contract.
struct DataError : Error {
  using Error::Error;
};

// Invalid configuration (fold plans, grids, flag combinations).
struct ConfigError : Error {
  using Error::Error;
};

// Optimization failure (non-finite objective).
struct TrainError : Error {
  using Error::Error;
};

}  // namespace typoscope
