#pragma once

#include <stdexcept>
#include <string>

namespace cqa {

/// Raised when an argument lies outside the documented domain of an operation.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A lag that does not leave at least one lagged pair in the series.
class InvalidLag : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Two feature sets computed with different lags, levels or radius.
class IncompatibleFeatures : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Generator coefficients violating positivity or stationarity.
class InvalidSpec : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Clustering configuration that cannot be run on the given data.
class InvalidConfig : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace cqa
