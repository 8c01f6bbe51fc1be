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

// Content encryption: each 16-byte block i of a file is stored as
//   E_k2(plain XOR S[i mod M] XOR iv)
// where S is an OFB keystream under k1 (the mask) and iv is a per-file random
// block kept in the file header. No chaining, so any block decrypts alone.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "common/bytes.hpp"
#include "crypto/backing_file.hpp"
#include "crypto/cipher.hpp"

namespace efs::crypto {

inline constexpr std::size_t kMinPassphraseLength = 16;
inline constexpr unsigned kDefaultKdfIterations = 10000;
inline constexpr std::size_t kDefaultMaskBlocks = 4096;

/// Salts double as domain-separation labels for the two subkeys.
inline constexpr std::string_view kMaskKeyLabel = "EFS-mask";
inline constexpr std::string_view kBlockKeyLabel = "EFS-block";

struct SubKeyPair {
  Key128 mask_key{};   // k1: seeds the whitening keystream
  Key128 block_key{};  // k2: the ECB pass

  SubKeyPair() = default;
  SubKeyPair(const Key128& k1, const Key128& k2) : mask_key(k1), block_key(k2) {}
  SubKeyPair(const SubKeyPair&) = default;
  SubKeyPair& operator=(const SubKeyPair&) = default;
  ~SubKeyPair() { wipe(); }

  void wipe() noexcept {
    secure_zero(mask_key.data(), mask_key.size());
    secure_zero(block_key.data(), block_key.size());
  }
  bool operator==(const SubKeyPair&) const = default;
};

/// Throws Error(PassphraseTooShort) below 16 bytes.
SubKeyPair derive_subkeys(ByteSpan passphrase, unsigned iterations = kDefaultKdfIterations);

/// Precomputed whitening blocks S_0..S_{M-1}; immutable once built.
class MaskStream {
 public:
  MaskStream(const Key128& mask_key, std::size_t period_blocks);
  ~MaskStream() { secure_zero(blocks_.data(), blocks_.size()); }
  MaskStream(const MaskStream&) = default;
  MaskStream& operator=(const MaskStream&) = default;

  std::size_t period() const noexcept { return blocks_.size() / kBlockSize; }
  /// S_{index mod M}.
  const std::uint8_t* block(std::uint64_t index) const noexcept {
    return blocks_.data() + (index % period()) * kBlockSize;
  }
  ByteSpan bytes() const noexcept { return blocks_; }
  bool operator==(const MaskStream&) const = default;

 private:
  Bytes blocks_;
};

MaskStream generate_mask(const Key128& mask_key, std::size_t period_blocks);

/// Everything needed to transform content under one passphrase. Shareable
/// across threads.
struct ContentKeys {
  SubKeyPair keys;
  MaskStream mask;

  ContentKeys(SubKeyPair k, std::size_t period_blocks)
      : keys(k), mask(generate_mask(k.mask_key, period_blocks)) {}
  ContentKeys(SubKeyPair k, MaskStream m) : keys(k), mask(std::move(m)) {}
};

Block seal_block(std::uint64_t index, const Block& plain, const MaskStream& mask,
                 const Block& iv, const Key128& block_key);
Block open_block(std::uint64_t index, const Block& cipher, const MaskStream& mask,
                 const Block& iv, const Key128& block_key);

/// In-place batch forms; data covers blocks first_index, first_index+1, ...
void seal_blocks(std::uint64_t first_index, std::span<std::uint8_t> data, const ContentKeys& keys,
                 const Block& iv);
void open_blocks(std::uint64_t first_index, std::span<std::uint8_t> data, const ContentKeys& keys,
                 const Block& iv);

// ---------------------------------------------------------------------------
// File header: "EFS1" | version u16 | flags u16 | plaintext_length u64 | iv[16]

inline constexpr std::size_t kHeaderSize = 32;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint16_t kFlagAsciiPayload = 0x0001;

struct FileHeader {
  std::uint16_t version = kFormatVersion;
  std::uint16_t flags = 0;
  std::uint64_t plaintext_length = 0;
  Block iv{};

  bool ascii() const noexcept { return (flags & kFlagAsciiPayload) != 0; }
  bool operator==(const FileHeader&) const = default;
};

std::array<std::uint8_t, kHeaderSize> build_header(std::uint64_t plaintext_length, const Block& iv,
                                                   std::uint16_t flags);
/// Throws Error(CorruptHeader) on short input, bad magic, bad version or
/// reserved flag bits.
FileHeader parse_header(ByteSpan bytes);

/// Size of the payload (after the header) for a given cleartext length.
std::uint64_t payload_size(std::uint64_t plaintext_length, bool ascii);

// ---------------------------------------------------------------------------
// Byte-granular access to an encrypted file. Callers serialize writers.

/// Writes a fresh header with a random IV and truncates any payload.
FileHeader initialize_file(const BackingFile& file, std::uint16_t flags = 0);

/// nullopt for a zero-length file (no header yet); CorruptHeader for 1..31 bytes.
std::optional<FileHeader> read_header(const BackingFile& file);

Bytes read_range(const BackingFile& file, std::uint64_t offset, std::uint64_t count,
                 const ContentKeys& keys);

/// Read-modify-write at block granularity. A zero-length file gets a header
/// (with `new_file_flags`) on first write. Returns data.size().
std::size_t write_range(const BackingFile& file, std::uint64_t offset, ByteSpan data,
                        const ContentKeys& keys, std::uint16_t new_file_flags = 0);

}  // namespace efs::crypto
