// Copyright 2026 The Authors.
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

#include "bpe/error.h"

namespace bpe {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidHandle:
      return "invalid-handle";
    case ErrorCode::kUnknownSymbol:
      return "unknown-symbol";
    case ErrorCode::kInvalidSequence:
      return "invalid-sequence";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kNoPair:
      return "no-pair";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kAmbiguity:
      return "ambiguity";
    case ErrorCode::kCapacity:
      return "capacity";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace bpe
