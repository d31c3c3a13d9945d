#pragma once

#include <stdexcept>
#include <string>

namespace qcloud {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad index, bad shape, value
/// out of range).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Raised while reading QASM, manifests, checkpoints or config files.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

  private:
    int line_;
};

/// Experiment configuration is missing fields or inconsistent.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A NaN/Inf surfaced in a loss or gradient.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace qcloud
