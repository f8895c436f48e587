// Copyright 2026 The concept-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONCEPT_EVAL_ERROR_HPP
#define CONCEPT_EVAL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace concept_eval {

/// Classifies every failure the library reports. Callers that batch work
/// (per-concept, per-pair) switch on this to decide skip-vs-abort.
enum class ErrorKind {
  kIo,
  kMalformedHeader,
  kRowArity,
  kNonFinite,
  kDuplicateIdentifier,
  kTruncated,
  kTrailingData,
  kEmptyInput,
  kMalformedLine,
  kInvalidToken,
  kCountMismatch,
  kUnknownIdentifier,
  kZeroNorm,
  kDimensionMismatch,
  kCycle,
  kDisconnected,
  kNoEntities,
  kInvalidArgument,
  kConstantSequence,
  kOutOfScale,
  kMissingSchema,
  kInsufficientCandidates,
  kDegenerate,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io";
    case ErrorKind::kMalformedHeader: return "malformed_header";
    case ErrorKind::kRowArity: return "row_arity";
    case ErrorKind::kNonFinite: return "non_finite";
    case ErrorKind::kDuplicateIdentifier: return "duplicate_identifier";
    case ErrorKind::kTruncated: return "truncated";
    case ErrorKind::kTrailingData: return "trailing_data";
    case ErrorKind::kEmptyInput: return "empty_input";
    case ErrorKind::kMalformedLine: return "malformed_line";
    case ErrorKind::kInvalidToken: return "invalid_token";
    case ErrorKind::kCountMismatch: return "count_mismatch";
    case ErrorKind::kUnknownIdentifier: return "unknown_identifier";
    case ErrorKind::kZeroNorm: return "zero_norm";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kCycle: return "cycle";
    case ErrorKind::kDisconnected: return "disconnected";
    case ErrorKind::kNoEntities: return "no_entities";
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kConstantSequence: return "constant_sequence";
    case ErrorKind::kOutOfScale: return "out_of_scale";
    case ErrorKind::kMissingSchema: return "missing_schema";
    case ErrorKind::kInsufficientCandidates: return "insufficient_candidates";
    case ErrorKind::kDegenerate: return "degenerate";
  }
  return "unknown";
}

/// The single exception type thrown by the library. `line()` is 1-based and
/// zero when the error is not tied to an input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(format(kind, message, line)), kind_(kind), line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message, std::size_t line) {
    std::string out(to_string(kind));
    if (line != 0) {
      out += " at line ";
      out += std::to_string(line);
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_ERROR_HPP
