// Copyright (c) 2026 The LPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPM_ERROR_H_
#define LPM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpm {

enum class ErrorCode {
  kFileNotFound,
  kUnsupportedFormat,
  kEmptyAudio,
  kTooShort,
  kSilentNoise,
  kSilentSpeech,
  kBadMagic,
  kVersionMismatch,
  kShapeMismatch,
  kTruncatedFile,
  kCorruptFile,
  kDimensionMismatch,
  kNoSpeechDetected,
  kEmptySequence,
  kBandTooNarrow,
  kInsufficientTemplates,
  kEmptyEmbedding,
  kEmptyPhraseSet,
  kBackendMismatch,
  kParseError,
  kMissingAudio,
  kDuplicateEntry,
  kInsufficientData,
  kNoInDomainPredictions,
  kInvalidArgument,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported with this type. The
// message carries the context (file, tensor name, label, line number).
class LpmError : public std::runtime_error {
 public:
  LpmError(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // Context without the error-code prefix.
  const std::string &message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace lpm

#endif  // LPM_ERROR_H_
