#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curv4 {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 1-based byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at position " + std::to_string(position) + ": " +
              message),
        position_(position),
        message_(message) {}
  std::size_t position() const { return position_; }
  const std::string& detail() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

class UnknownIdentifier : public SyntaxError {
 public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : SyntaxError(position, "unknown identifier '" + name + "'"),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// log/sqrt of a negative number, division by zero, non-finite result.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& where, double smallest)
      : Error("metric not positive definite at " + where +
              " (smallest eigenvalue " + std::to_string(smallest) + ")"),
        smallest_(smallest) {}
  double smallest_eigenvalue() const { return smallest_; }

 private:
  double smallest_;
};

class NotDecomposable : public Error { using Error::Error; };
class ZeroForm : public Error { using Error::Error; };
class NotUnit : public Error { using Error::Error; };
class NotSelfDual : public Error { using Error::Error; };
class NotAntiSelfDual : public Error { using Error::Error; };
class DegeneratePlane : public Error { using Error::Error; };
class EmptySample : public Error { using Error::Error; };
class NotNormalized : public Error { using Error::Error; };
class VanishingForm : public Error { using Error::Error; };
class MixedDuality : public Error { using Error::Error; };
class UnknownModel : public Error { using Error::Error; };
class BadParams : public Error { using Error::Error; };

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, std::size_t line,
              const std::string& message)
      : Error("config error" +
              (line ? " (line " + std::to_string(line) + ")" : std::string()) +
              (key.empty() ? std::string() : " [" + key + "]") + ": " +
              message),
        key_(key),
        line_(line) {}
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

}  // namespace curv4
