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

// Evaluation manifests: UTF-8 JSON Lines, one utterance per line.
//
//   {"path": "s01/p03_r2.wav", "speaker": "s01", "phrase": "p03",
//    "session": "1", "mic": "near", "rep": 2}
//   {"path": "s01/read_1.wav", "speaker": "s01", "phrase": "AGGRESSOR",
//    "session": "1"}
//
// "mic" is near | far | unspecified (default unspecified). "rep" is required
// for phrase utterances and forbidden for aggressor speech. Relative paths
// resolve against the manifest's directory. Blank lines and lines starting
// with '#' are skipped.

#ifndef LPM_MANIFEST_H_
#define LPM_MANIFEST_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpm {

inline constexpr std::string_view kAggressorPhrase = "AGGRESSOR";

enum class MicCondition { kNear, kFar, kUnspecified };

std::string_view MicConditionName(MicCondition mic);

struct ManifestEntry {
  std::string audio_path;
  std::string speaker;
  std::string phrase;
  std::string session;
  MicCondition mic = MicCondition::kUnspecified;
  std::optional<int> repetition;

  bool is_aggressor() const { return phrase == kAggressorPhrase; }
  bool operator==(const ManifestEntry &) const = default;
};

// Parses and validates records; the result is sorted canonically (speaker,
// phrase, session, rep, mic, path) so downstream results do not depend on
// row order. (speaker, phrase, session, rep) must be unique.
// Throws kParseError (with line number), kDuplicateEntry.
std::vector<ManifestEntry> ParseManifest(std::istream &in,
                                         const std::string &base_dir = "");

// ParseManifest plus an existence check of every audio path; missing files
// are reported together with kMissingAudio.
std::vector<ManifestEntry> LoadManifest(const std::string &path,
                                        bool check_audio = true);

}  // namespace lpm

#endif  // LPM_MANIFEST_H_
