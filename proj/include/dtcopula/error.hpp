#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtcopula {

/// Argument outside the mathematical domain of an operation (copula
/// parameter out of range, probability outside [0,1], unattainable tau).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input data or configuration that fails validation.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what,
                           std::vector<std::size_t> rows = {})
      : std::invalid_argument(what), rows_(std::move(rows)) {}

  /// Offending row indices (0-based), when the error concerns records.
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

/// An iteration ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double last_change,
                   std::vector<double> last_f = {},
                   std::vector<double> last_k = {})
      : std::runtime_error(what),
        iterations_(iterations),
        last_change_(last_change),
        last_f_(std::move(last_f)),
        last_k_(std::move(last_k)) {}

  int iterations() const noexcept { return iterations_; }
  double last_change() const noexcept { return last_change_; }
  const std::vector<double>& last_f() const noexcept { return last_f_; }
  const std::vector<double>& last_k() const noexcept { return last_k_; }

 private:
  int iterations_;
  double last_change_;
  std::vector<double> last_f_;
  std::vector<double> last_k_;
};

/// A weighted sum or score denominator that must be positive was not.
/// Carries the record index and the offending value.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, std::size_t index, double value)
      : std::runtime_error(what), index_(index), value_(value) {}

  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t index_;
  double value_;
};

/// Rejection sampler exhausted its candidate budget.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many replicates of a bootstrap or Monte Carlo run failed.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(const std::string& what, std::size_t attempts,
                   std::size_t failures)
      : std::runtime_error(what), attempts_(attempts), failures_(failures) {}

  std::size_t attempts() const noexcept { return attempts_; }
  std::size_t failures() const noexcept { return failures_; }

 private:
  std::size_t attempts_;
  std::size_t failures_;
};

}  // namespace dtcopula
