#pragma once

#include <stdexcept>
#include <string>

namespace secnet {

/// Invalid model or configuration input. Maps to CLI exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested hard-core intensity is at or above the saturation bound 1/(pi d^2).
class InfeasibleTargetError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Malformed, unknown or out-of-range configuration entry.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Redundancy rate not below the transmission rate.
class RateError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Users per UAV not below the antenna count.
class AntennaError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Quadrature did not converge, or a series lost too much precision. Exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A sampler exhausted its rejection budget.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

/// Channel matrix too close to rank-deficient for zero-forcing.
class DegenerateChannelError : public std::runtime_error {
 public:
  explicit DegenerateChannelError(const std::string& what) : std::runtime_error(what) {}
};

/// An estimator saw no conditioning events.
class DegenerateEstimateError : public std::runtime_error {
 public:
  explicit DegenerateEstimateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace secnet
