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

#include <filesystem>
#include <string_view>

#include "crypto/content.hpp"

namespace efs::daemon {

/// Kept out of name encryption; '=' never occurs in an encoded name.
inline constexpr std::string_view kValidatorName = "=efs-validator=";
inline constexpr std::string_view kValidatorMagic = "EFS-VALIDATOR-MAGIC-0123456789AB";

/// Creates `dir` (absent or empty) as an encrypted directory keyed by
/// `passphrase`. On failure nothing new is left behind.
void create_efs_directory(const std::filesystem::path& dir, ByteSpan passphrase,
                          std::size_t mask_blocks = crypto::kDefaultMaskBlocks,
                          unsigned kdf_iterations = crypto::kDefaultKdfIterations);

void write_validator(const std::filesystem::path& dir, const crypto::ContentKeys& keys);

/// True iff the validator decrypts to the magic under these subkeys. Only the
/// leading mask blocks are generated, so a wrong key costs no full mask.
/// Throws NotAnEfsDirectory when there is no validator file.
bool check_validator(const std::filesystem::path& dir, const crypto::SubKeyPair& keys,
                     std::size_t mask_blocks);

}  // namespace efs::daemon
