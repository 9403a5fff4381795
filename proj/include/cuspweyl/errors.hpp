/*
 * errors.hpp: exception hierarchy shared by all cuspweyl modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace cuspweyl {

/// Base class; `kind()` is the machine-readable tag the CLI reports.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// An operation was called outside its documented input domain.
class precondition_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "precondition"; }
};

/// A point lies outside the domain of a function (e.g. t < alpha).
class domain_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "domain"; }
};

/// Enumeration would exceed the configured element budget.
class resource_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "resource"; }
};

/// Counting requested inside the continuous spectrum of a zero-mode channel.
class continuous_spectrum_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "continuous spectrum channel"; }
};

/// Model file could not be parsed.
class model_format_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "model format"; }
};

}  // namespace cuspweyl
