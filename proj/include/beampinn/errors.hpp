#pragma once

#include <stdexcept>
#include <string>

namespace beampinn {

/// Invalid or unsupported configuration (bad physical constants, unknown keys, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (shape/order mismatch, index out of range).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Training produced a non-finite loss or evaluation.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, long epoch = -1)
      : std::runtime_error(what), epoch_(epoch) {}

  long epoch() const noexcept { return epoch_; }

 private:
  long epoch_;
};

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative error requested against an all-zero reference.
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beampinn
