// Copyright 2026 The Auto-GDA Authors.
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

#ifndef AUTOGDA_HASHING_H_
#define AUTOGDA_HASHING_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace autogda {

std::array<std::uint8_t, 32> sha256(std::string_view data);

// Lowercase hex of the SHA-256 digest.
std::string sha256_hex(std::string_view data);

// First eight digest bytes read big-endian.
std::uint64_t sha256_u64(std::string_view data);

}  // namespace autogda

#endif  // AUTOGDA_HASHING_H_
