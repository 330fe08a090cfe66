#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace badcantor {

enum class ErrorCode {
  SumNotOne,
  NonPositiveEntry,
  EmptyWeight,
  Degenerate,
  FirstComponentNotIdentity,
  NoAdmissibleInterval,
  DegenerateXi,
  RInadmissible,
  DimensionMismatch,
  PrecisionExhausted,
  Undecidable,
  MTooSmall,
  Extinct,
  CertificateBroken,
  NoPrimalSolution,
  SearchExhausted,
  ConfigError,
  ParseError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace badcantor
