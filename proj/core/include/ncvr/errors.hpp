#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncvr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad dimension, nonpositive
/// step size, infeasible schedule, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite or overflowing value.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what,
                        std::optional<std::size_t> component = std::nullopt)
      : Error(what), component_(component) {}

  /// Index of the offending component function, when one is known.
  std::optional<std::size_t> component() const { return component_; }

 private:
  std::optional<std::size_t> component_;
};

/// Malformed input text. Line numbers are 1-based; 0 means "not tied to a line".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A declarative spec failed validation; carries every issue found.
class ValidationError : public ContractViolation {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : ContractViolation(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid spec";
    for (const auto& issue : issues) out += "\n  - " + issue;
    return out;
  }

  std::vector<std::string> issues_;
};

namespace detail {

[[noreturn]] inline void contract_failure(const std::string& message) {
  throw ContractViolation(message);
}

}  // namespace detail

inline void require(bool condition, const std::string& message) {
  if (!condition) detail::contract_failure(message);
}

}  // namespace ncvr
