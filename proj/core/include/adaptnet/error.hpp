#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adaptnet {

enum class ErrorKind {
  kInvalidArgument,
  kConnectivity,
  kStructure,
  kIterationLimit,
  kStability,
  kNumerical,
  kAccuracy,
  kModel,
  kObservability,
  kContract,
  kDomain,
  kDivergence,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

/// Base of every exception thrown by the library. `kind()` lets callers
/// branch on the failure class without RTTI on the derived types.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& message, double residual)
      : Error(ErrorKind::kIterationLimit, message), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Carries the quantity that violated the stability requirement: the minimum
/// eigenvalue real part for continuous problems, the spectral radius for
/// discrete ones, or the step-size bound.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& message, double indicator)
      : Error(ErrorKind::kStability, message), indicator_(indicator) {}

  double indicator() const noexcept { return indicator_; }

 private:
  double indicator_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, std::size_t trial,
                  std::size_t iteration)
      : Error(ErrorKind::kDivergence, message),
        trial_(trial),
        iteration_(iteration) {}

  std::size_t trial() const noexcept { return trial_; }
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t trial_;
  std::size_t iteration_;
};

}  // namespace adaptnet
