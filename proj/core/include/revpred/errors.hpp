#pragma once

#include <stdexcept>
#include <string>

namespace revpred {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad knob values, unreadable word lists, unknown
/// predictor names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problems with the data itself: missing dataset files, infeasible samples,
/// empty splits.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace revpred
