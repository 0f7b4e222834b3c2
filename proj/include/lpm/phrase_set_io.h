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

// LPMS phrase-set files.
//
// Layout (little-endian):
//   "LPMS" | version u32 | alpha f64 (+inf encodes classification mode) |
//   metric u8 | normalize u8 | band radius u32 (0 = no band) |
//   backend kind u8 | backend hash 32 bytes | template count u32 |
//   per template: label length u16, UTF-8 label, tau f64, t u32, f u32,
//   t * f float32 values (row-major) |
//   CRC32 of all preceding bytes.

#ifndef LPM_PHRASE_SET_IO_H_
#define LPM_PHRASE_SET_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lpm/matcher.h"

namespace lpm {

inline constexpr std::uint32_t kPhraseSetFormatVersion = 1;

std::vector<std::uint8_t> EncodePhraseSet(const PhraseSet &set);
// Throws kBadMagic, kVersionMismatch, kCorruptFile.
PhraseSet DecodePhraseSet(const std::vector<std::uint8_t> &bytes);

void SavePhraseSet(const PhraseSet &set, const std::string &path);
// When `expected_backend` is given, a set enrolled with a different backend
// is refused with kBackendMismatch.
PhraseSet LoadPhraseSet(const std::string &path,
                        const BackendId *expected_backend = nullptr);

}  // namespace lpm

#endif  // LPM_PHRASE_SET_IO_H_
