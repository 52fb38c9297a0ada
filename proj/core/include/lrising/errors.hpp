#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrising {

/// Invalid user-facing configuration or malformed input. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file that failed to parse; carries the offending 1-based line.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : ConfigError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical failure (SW degeneracy, solver non-convergence). Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two configurations whose unperturbed energies coincide inside the
/// perturbative denominator |E_m - E_beta|.
class SwDegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A single Krylov step cannot reach the requested accuracy; the caller has to
/// split the interval into at least `substeps()` pieces.
class KrylovToleranceError : public NumericalError {
 public:
  KrylovToleranceError(const std::string& what, int substeps)
      : NumericalError(what), substeps_(substeps) {}
  int substeps() const noexcept { return substeps_; }

 private:
  int substeps_;
};

/// Problem size exceeds the configured memory or site budget. Exit code 4.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double required_bytes)
      : std::runtime_error(what), required_bytes_(required_bytes) {}
  double required_bytes() const noexcept { return required_bytes_; }

 private:
  double required_bytes_;
};

}  // namespace lrising
