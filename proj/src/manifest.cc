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

#include "lpm/manifest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <tuple>

#include "json.hpp"
#include "lpm/error.h"

namespace lpm {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void Fail(std::size_t line, const std::string &what) {
  throw LpmError(ErrorCode::kParseError,
                 "line " + std::to_string(line) + ": " + what);
}

std::string StringField(const json &rec, const char *key, std::size_t line,
                        bool required) {
  if (!rec.contains(key)) {
    if (required) Fail(line, std::string("missing field '") + key + "'");
    return {};
  }
  const json &v = rec.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  Fail(line, std::string("field '") + key + "' must be a string");
}

auto SortKey(const ManifestEntry &e) {
  return std::tie(e.speaker, e.phrase, e.session, e.repetition, e.mic,
                  e.audio_path);
}

}  // namespace

std::string_view MicConditionName(MicCondition mic) {
  switch (mic) {
    case MicCondition::kNear: return "near";
    case MicCondition::kFar: return "far";
    case MicCondition::kUnspecified: return "unspecified";
  }
  return "unspecified";
}

std::vector<ManifestEntry> ParseManifest(std::istream &in,
                                         const std::string &base_dir) {
  static const std::set<std::string> kKnown = {"path",    "speaker", "phrase",
                                               "session", "mic",     "rep"};
  std::vector<ManifestEntry> entries;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;

    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error &e) {
      Fail(line, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) Fail(line, "record must be a JSON object");
    for (const auto &item : rec.items()) {
      if (!kKnown.count(item.key())) {
        Fail(line, "unknown field '" + item.key() + "'");
      }
    }

    ManifestEntry e;
    e.audio_path = StringField(rec, "path", line, true);
    e.speaker = StringField(rec, "speaker", line, true);
    e.phrase = StringField(rec, "phrase", line, true);
    e.session = StringField(rec, "session", line, true);
    if (e.audio_path.empty() || e.speaker.empty() || e.phrase.empty()) {
      Fail(line, "path, speaker and phrase must be non-empty");
    }
    const std::string mic = StringField(rec, "mic", line, false);
    if (mic.empty() || mic == "unspecified") {
      e.mic = MicCondition::kUnspecified;
    } else if (mic == "near") {
      e.mic = MicCondition::kNear;
    } else if (mic == "far") {
      e.mic = MicCondition::kFar;
    } else {
      Fail(line, "field 'mic' has unknown value '" + mic +
                     "' (near | far | unspecified)");
    }
    if (rec.contains("rep")) {
      if (!rec["rep"].is_number_integer() || rec["rep"].get<long long>() < 0) {
        Fail(line, "field 'rep' must be a non-negative integer");
      }
      e.repetition = rec["rep"].get<int>();
    }
    if (e.is_aggressor() && e.repetition) {
      Fail(line, "field 'rep' is not allowed on aggressor speech");
    }
    if (!e.is_aggressor() && !e.repetition) {
      Fail(line, "missing field 'rep'");
    }
    if (!base_dir.empty() && fs::path(e.audio_path).is_relative()) {
      e.audio_path = (fs::path(base_dir) / e.audio_path).lexically_normal();
    }
    entries.push_back(std::move(e));
  }

  std::sort(entries.begin(), entries.end(),
            [](const auto &a, const auto &b) { return SortKey(a) < SortKey(b); });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto &a = entries[i - 1], &b = entries[i];
    const bool same_utterance =
        !a.is_aggressor() && a.speaker == b.speaker && a.phrase == b.phrase &&
        a.session == b.session && a.repetition == b.repetition;
    if (same_utterance || (a.audio_path == b.audio_path &&
                           a.speaker == b.speaker && a.phrase == b.phrase)) {
      throw LpmError(ErrorCode::kDuplicateEntry,
                     "speaker '" + b.speaker + "' phrase '" + b.phrase +
                         "' session '" + b.session + "' rep " +
                         (b.repetition ? std::to_string(*b.repetition) : "-") +
                         " appears more than once");
    }
  }
  return entries;
}

std::vector<ManifestEntry> LoadManifest(const std::string &path,
                                        bool check_audio) {
  std::ifstream in(path);
  if (!in) throw LpmError(ErrorCode::kFileNotFound, path);
  auto entries =
      ParseManifest(in, fs::path(path).parent_path().string());
  if (check_audio) {
    std::string missing;
    std::size_t count = 0;
    for (const auto &e : entries) {
      std::error_code ec;
      if (fs::is_regular_file(e.audio_path, ec)) continue;
      if (count++ < 20) missing += "\n  " + e.audio_path;
    }
    if (count > 0) {
      throw LpmError(ErrorCode::kMissingAudio,
                     std::to_string(count) + " audio file(s) not found:" +
                         missing);
    }
  }
  return entries;
}

}  // namespace lpm
