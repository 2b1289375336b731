#pragma once

#include <stdexcept>
#include <string>

namespace acquisim {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad header, ragged row, unparseable number, duplicate id).
struct ParseError : Error {
  using Error::Error;
};

/// Input violates a data invariant (non-positive consumption, unknown id).
struct ValidationError : Error {
  using Error::Error;
};

/// Invalid configuration value or argument combination.
struct ConfigError : Error {
  using Error::Error;
};

/// Model fitting could not proceed (too few points, diverging solver).
struct TrainingError : Error {
  using Error::Error;
};

/// Feature width does not match the model's dimensionality.
struct ShapeError : Error {
  using Error::Error;
};

/// Classifier training labels contain a single class.
struct DegenerateLabels : Error {
  using Error::Error;
};

/// An acquisition operation was asked to act on an empty pool.
struct EmptyPool : Error {
  using Error::Error;
};

/// A pool group has no entry in the supplied group metrics.
struct MissingGroupMetric : Error {
  using Error::Error;
};

/// Filesystem failure (unwritable path, missing file).
struct IoError : Error {
  using Error::Error;
};

}  // namespace acquisim
