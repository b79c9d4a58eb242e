#pragma once

#include <stdexcept>
#include <string>

namespace gnet {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The graph contains a directed cycle; the message names a node on it.
struct CycleError : Error {
  using Error::Error;
};

/// Two objects that must agree on node/sample counts do not.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// Input exceeds a hard size guard (enumeration, DP memory, mask width).
struct TooLarge : Error {
  using Error::Error;
};

/// Fewer samples than regressors (need n > k).
struct InsufficientSamples : Error {
  using Error::Error;
};

/// The normal-equation Gram matrix is numerically singular.
struct SingularDesign : Error {
  using Error::Error;
};

/// A maximum-likelihood statistic fell below its floor in strict mode.
struct DegenerateFit : Error {
  using Error::Error;
};

/// Expected neighbor count outside (0, m-1].
struct InvalidSparsity : Error {
  using Error::Error;
};

/// Malformed file content (CSV, JSON, config).
struct ParseError : Error {
  using Error::Error;
};

/// Contract violation not covered by a more specific class.
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace gnet
