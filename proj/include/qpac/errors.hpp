#pragma once

#include <stdexcept>
#include <string>

namespace qpac {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string &msg) : Error(msg) {}
};

class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &msg) : Error(msg) {}
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &msg) : Error(msg) {}
};

class LabelDomainError : public Error {
  public:
    explicit LabelDomainError(const std::string &msg) : Error(msg) {}
};

class InvalidPovmError : public Error {
  public:
    explicit InvalidPovmError(const std::string &msg) : Error(msg) {}
};

class NotCompleteError : public Error {
  public:
    explicit NotCompleteError(const std::string &msg) : Error(msg) {}
};

class UnsupportedError : public Error {
  public:
    explicit UnsupportedError(const std::string &msg) : Error(msg) {}
};

class EmptyDatasetError : public Error {
  public:
    explicit EmptyDatasetError(const std::string &msg) : Error(msg) {}
};

class EmptyInputError : public Error {
  public:
    explicit EmptyInputError(const std::string &msg) : Error(msg) {}
};

class InsufficientSamplesError : public Error {
  public:
    explicit InsufficientSamplesError(const std::string &msg) : Error(msg) {}
};

class RangeError : public Error {
  public:
    explicit RangeError(const std::string &msg) : Error(msg) {}
};

/// A training sample was measured a second time after it already collapsed.
class SampleReuseError : public Error {
  public:
    explicit SampleReuseError(const std::string &msg) : Error(msg) {}
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string &msg) : Error(msg) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string &msg) : Error(msg) {}
};

} // namespace qpac
