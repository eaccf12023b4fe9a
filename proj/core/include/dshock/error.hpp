#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dshock {

enum class ErrorKind {
  InvalidGrid,
  UnsupportedDimension,
  IncompatibleFields,
  KernelTooNarrow,
  KernelTooWide,
  UnstableStep,
  InvalidFlux,
  InvalidParams,
  BlowUp,
  InsufficientData,
  InvalidLadder,
  CharacteristicsCrossed,
  Parse,
  Validation,
  Io,
  NothingToPlot,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a field leaves the finite range during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(double time, std::string field, double magnitude);

  double time() const noexcept { return time_; }
  const std::string& field() const noexcept { return field_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  double time_;
  std::string field_;
  double magnitude_;
};

}  // namespace dshock
