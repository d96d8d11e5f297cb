// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#ifndef VPFFT_ERRORS_HPP
#define VPFFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vpfft {

//! Coarse error domains; each maps onto one process exit code / C status code.
enum class ErrorKind {
  config,  //!< invalid user input: parameters, flags, config keys (exit 2)
  solver,  //!< numerical failure: divergence, singular operator, overflow (exit 3)
  io       //!< file-system or format errors (exit 4)
};

//! Base of all library exceptions. Carries the domain used by the C API and
//! the CLI to pick status/exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what_arg)
      : std::runtime_error(what_arg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(ErrorKind::config, msg) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& msg) : Error(ErrorKind::solver, msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(ErrorKind::io, msg) {}
};

//! A Newton loop (scalar, local, or global) exhausted its iteration budget.
class NoConvergenceError : public SolverError {
 public:
  explicit NoConvergenceError(const std::string& msg) : SolverError(msg) {}
};

//! The hardening law produced a non-positive flow stress.
class NonPositiveYieldError : public SolverError {
 public:
  explicit NonPositiveYieldError(const std::string& msg) : SolverError(msg) {}
};

//! The power-law rate exceeded the configured overflow cap.
class RateOverflowError : public SolverError {
 public:
  explicit RateOverflowError(const std::string& msg) : SolverError(msg) {}
};

//! A fourth-order tensor was numerically singular under the condition cap.
class SingularTensorError : public SolverError {
 public:
  explicit SingularTensorError(const std::string& msg) : SolverError(msg) {}
};

}  // namespace vpfft

#endif  // VPFFT_ERRORS_HPP
