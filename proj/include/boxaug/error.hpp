// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boxaug {

enum class ErrorCode {
  kMalformedLine,
  kMissingFile,
  kCorruptImage,
  kIoFailure,
  kDimensionMismatch,
  kMissingScore,
  kIdMismatch,
  kMissingClass,
  kEmptySplit,
  kZeroFrequency,
  kConfigInvalid,
  kUnknownOp,
  kMissingSample,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kCorruptImage: return "CorruptImage";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingScore: return "MissingScore";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kZeroFrequency: return "ZeroFrequency";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kUnknownOp: return "UnknownOp";
    case ErrorCode::kMissingSample: return "MissingSample";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the category;
/// the message carries the context (path, line number, class name).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure for one label line. `line()` is 1-based; 0 when unknown.
class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& reason)
      : Error(ErrorCode::kMalformedLine, "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace boxaug
