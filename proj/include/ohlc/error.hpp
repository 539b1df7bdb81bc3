#pragma once

#include <stdexcept>
#include <string>

namespace ohlc {

enum class Errc {
  // bar validation / preprocessing
  NonPositiveLow,
  DegenerateRange,
  OutOfRangeOpenClose,
  NegativePrice,
  InconsistentBounds,
  DegenerateLambda,
  NonFinite,
  // feature space
  LengthMismatch,
  EmptySeries,
  ZeroVariance,
  // decomposition / model
  NotSymmetric,
  NoConvergence,
  ComponentsOutOfRange,
  LabelMismatch,
  // simulation metrics
  DimensionMismatch,
  NotUnitNorm,
  // tables / charts / files
  MissingHeader,
  BadNumeric,
  DuplicateKey,
  RaggedPivot,
  EmptyInput,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ohlc
