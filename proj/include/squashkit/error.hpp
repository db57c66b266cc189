#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace squashkit {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  DimensionMismatch,
  InvalidPovm,
  NotAState,
  NotUnitary,
  NotCyclic,
  KNotOne,
  InvalidGroup,
  InvalidAction,
  InvalidSector,
  SymmetryViolated,
  RankNotTwo,
  SpectrumAsymmetric,
  DeficiencyNotPsd,
  VerificationFailed,
  NotPsd,
  NotTracePreserving,
  TildeNotVerified,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by multi-stage pipelines; carries the stage that failed.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause)
      : Error(cause.code(), "[" + stage + "] " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace squashkit
