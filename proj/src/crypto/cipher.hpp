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

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "common/bytes.hpp"

namespace efs::crypto {

using Key128 = std::array<std::uint8_t, 16>;

/// AES-128 in raw ECB over whole blocks. One instance per thread; the
/// underlying contexts carry mutable state.
class Aes128 {
 public:
  explicit Aes128(const Key128& key);
  ~Aes128();
  Aes128(Aes128&&) noexcept;
  Aes128& operator=(Aes128&&) noexcept;
  Aes128(const Aes128&) = delete;
  Aes128& operator=(const Aes128&) = delete;

  // in.size() must be a multiple of 16 and equal to out.size(); in-place is fine.
  void encrypt(ByteSpan in, std::span<std::uint8_t> out);
  void decrypt(ByteSpan in, std::span<std::uint8_t> out);

 private:
  struct Contexts;
  std::unique_ptr<Contexts> ctx_;
};

/// AES-128-OFB keystream with an all-zero IV: block j is E^(j+1)(0).
Bytes ofb_keystream(const Key128& key, std::size_t blocks);

Key128 pbkdf2_sha256(ByteSpan passphrase, ByteSpan salt, unsigned iterations);

std::array<std::uint8_t, 32> hmac_sha256(ByteSpan key, ByteSpan data);

void random_bytes(std::span<std::uint8_t> out);

}  // namespace efs::crypto
