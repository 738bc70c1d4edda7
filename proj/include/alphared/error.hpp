// error.hpp

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

#ifndef ALPHARED_ERROR_HPP_
#define ALPHARED_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace alphared {

enum class ErrorKind {
  InvalidSymbol,
  InvalidStateIndex,
  IllegalUnknownOutput,
  ReservedSymbolInAlphabet,
  EmptyFst,
  EmptyCascade,
  SyntaxError,
  IoError,
  ReservedInputToken,
  TruncatedRelation,
  ReservedCandidate,
  InvalidLimits,
  InvalidParams,
};

inline const char *error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSymbol: return "InvalidSymbol";
    case ErrorKind::InvalidStateIndex: return "InvalidStateIndex";
    case ErrorKind::IllegalUnknownOutput: return "IllegalUnknownOutput";
    case ErrorKind::ReservedSymbolInAlphabet: return "ReservedSymbolInAlphabet";
    case ErrorKind::EmptyFst: return "EmptyFst";
    case ErrorKind::EmptyCascade: return "EmptyCascade";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ReservedInputToken: return "ReservedInputToken";
    case ErrorKind::TruncatedRelation: return "TruncatedRelation";
    case ErrorKind::ReservedCandidate: return "ReservedCandidate";
    case ErrorKind::InvalidLimits: return "InvalidLimits";
    case ErrorKind::InvalidParams: return "InvalidParams";
  }
  return "Unknown";
}

// Every failure in the library surfaces as an FstError; kind() lets callers
// (and the CLI's exit-code mapping) dispatch without parsing messages.
class FstError : public std::runtime_error {
 public:
  FstError(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const { return kind_; }
  // what() without the kind prefix.
  const std::string &message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace alphared

#endif  // ALPHARED_ERROR_HPP_
