// Copyright 2026 The efsgate Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include "common/bytes.hpp"

namespace efs {

/// Filename-safe base-64: alphabet A-Z a-z 0-9 '-' '_', MSB first, no padding.
/// Output length is ceil(4n/3). Encoding a concatenation whose first part is
/// a multiple of 3 bytes equals concatenating the encodings.
std::string encode_base64_safe(ByteSpan raw);

/// Exact inverse of encode_base64_safe. Throws Error(InvalidEncoding) on a
/// foreign character, a length of 1 mod 4, or nonzero trailing bits.
Bytes decode_base64_safe(std::string_view text);

inline constexpr std::size_t base64_safe_length(std::size_t raw_bytes) {
  return (raw_bytes * 4 + 2) / 3;
}

}  // namespace efs
