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

// Deterministic encryption of path components and symlink targets.
//
// Record layout before encryption:
//   checksum u16 BE | name bytes | zero padding to a multiple of 16
// Block j of the record is whitened with S_j (no IV, so equal names under
// equal keys always seal identically) and then encrypted under k2 in ECB.
// The result is stored as a filename-safe base-64 string.

#include <cstdint>
#include <string>
#include <string_view>

#include "common/bytes.hpp"
#include "crypto/content.hpp"

namespace efs::names {

inline constexpr std::size_t kMaxNameLength = 174;
inline constexpr std::size_t kMaxLinkTargetLength = 1024;

/// Byte sum mod 65536. Throws EmptyName / NameTooLong outside 1..174 bytes.
std::uint16_t name_checksum(ByteSpan name);

std::string encode_component(ByteSpan raw);
Bytes decode_component(std::string_view text);

/// Throws InvalidName for "/", NUL, "." or ".."; NameTooLong / EmptyName on length.
std::string seal_name(std::string_view name, const crypto::ContentKeys& keys);
/// Throws NotAnEfsName when the text is not a sealed record, ChecksumMismatch
/// when it decrypts to garbage (wrong key or foreign file).
std::string open_name(std::string_view encoded, const crypto::ContentKeys& keys);

/// Same scheme; '/' allowed, up to 1024 bytes.
std::string seal_link_target(std::string_view target, const crypto::ContentKeys& keys);
std::string open_link_target(std::string_view encoded, const crypto::ContentKeys& keys);

/// "." and "..": stored unencrypted.
inline bool is_dot_entry(std::string_view name) { return name == "." || name == ".."; }

}  // namespace efs::names
