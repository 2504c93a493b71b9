#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace debris {

enum class ErrorKind {
  Parse,
  Schema,
  Domain,
  OutOfSpan,
  MissingFeature,
  MissingMaterial,
  ShapeMismatch,
  Resolution,
  Io,
  Format,
  NotIndexed,
  IdCollision,
  EmptySample,
  TooFewSamples,
  EmptySelection,
  DimensionMismatch,
  SingleClass,
  NoEligibleCandidate,
  TooFewRows,
  DegenerateInput,
  FeatureSetMismatch,
  Config,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can map it to
// an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace debris
