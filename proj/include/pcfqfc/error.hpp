#pragma once

#include <stdexcept>
#include <string>

namespace pcfqfc {

/// Base class of every error raised by the library. The CLI maps each
/// subclass onto a distinct process exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the range where a model is defined (wavelength outside the
/// Sellmeier window, geometry outside the empirical fit, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed configuration, data file or command-line argument.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// An iterative solver could not bracket or converge.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// A statistic whose denominator vanished (e.g. R_CA with no singles).
class UndefinedResult : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace pcfqfc
