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

#include "crypto/content.hpp"

#include <algorithm>
#include <cstring>

#include "common/encoding.hpp"
#include "common/error.hpp"

namespace efs::crypto {

namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'F', 'S', '1'};

// Ascii payloads encode 3 cipher blocks (48 bytes) as 64 characters, so
// group g starts at character 64*g and groups can be rewritten independently.
constexpr std::uint64_t kGroupBlocks = 3;
constexpr std::uint64_t kGroupChars = 64;

std::uint64_t blocks_for(std::uint64_t length) { return (length + kBlockSize - 1) / kBlockSize; }

void whiten(std::uint64_t first_index, std::span<std::uint8_t> data, const MaskStream& mask,
            const Block& iv) {
  for (std::size_t off = 0; off < data.size(); off += kBlockSize) {
    std::uint8_t* b = data.data() + off;
    xor_into(b, mask.block(first_index + off / kBlockSize), kBlockSize);
    xor_into(b, iv.data(), kBlockSize);
  }
}

// Reads cipher blocks [first, first+count) of a file holding total_blocks.
Bytes read_cipher(const BackingFile& file, const FileHeader& hdr, std::uint64_t first,
                  std::uint64_t count, std::uint64_t total_blocks) {
  Bytes out(count * kBlockSize);
  if (count == 0) return out;
  if (!hdr.ascii()) {
    if (file.read_at(kHeaderSize + first * kBlockSize, out) != out.size()) {
      throw Error(Errc::CorruptHeader, "payload shorter than header length");
    }
    return out;
  }
  const std::uint64_t g0 = first / kGroupBlocks;
  const std::uint64_t span_first = g0 * kGroupBlocks;
  const std::uint64_t span_end =
      std::min(total_blocks, ((first + count - 1) / kGroupBlocks + 1) * kGroupBlocks);
  std::string text(base64_safe_length((span_end - span_first) * kBlockSize), '\0');
  if (file.read_at(kHeaderSize + g0 * kGroupChars,
                   {reinterpret_cast<std::uint8_t*>(text.data()), text.size()}) != text.size()) {
    throw Error(Errc::CorruptHeader, "payload shorter than header length");
  }
  Bytes raw = decode_base64_safe(text);
  const auto skip = static_cast<std::ptrdiff_t>((first - span_first) * kBlockSize);
  std::copy_n(raw.begin() + skip, out.size(), out.begin());
  return out;
}

// Writes cipher blocks starting at `first`. After the write the file holds
// total_blocks blocks; every block in [0, total_blocks) outside the written
// range must be among the existing_blocks already stored.
void write_cipher(const BackingFile& file, const FileHeader& hdr, std::uint64_t first,
                  ByteSpan cipher, std::uint64_t existing_blocks, std::uint64_t total_blocks) {
  if (cipher.empty()) return;
  if (!hdr.ascii()) {
    file.write_at(kHeaderSize + first * kBlockSize, cipher);
    return;
  }
  const std::uint64_t count = cipher.size() / kBlockSize;
  const std::uint64_t g0 = first / kGroupBlocks;
  const std::uint64_t span_first = g0 * kGroupBlocks;
  const std::uint64_t span_end =
      std::min(total_blocks, ((first + count - 1) / kGroupBlocks + 1) * kGroupBlocks);
  Bytes raw((span_end - span_first) * kBlockSize);
  if (first > span_first) {
    Bytes head = read_cipher(file, hdr, span_first, first - span_first, existing_blocks);
    std::copy(head.begin(), head.end(), raw.begin());
  }
  if (first + count < span_end) {
    Bytes tail = read_cipher(file, hdr, first + count, span_end - first - count, existing_blocks);
    std::copy(tail.begin(), tail.end(),
              raw.begin() + static_cast<std::ptrdiff_t>((first + count - span_first) * kBlockSize));
  }
  std::copy(cipher.begin(), cipher.end(),
            raw.begin() + static_cast<std::ptrdiff_t>((first - span_first) * kBlockSize));
  const std::string text = encode_base64_safe(raw);
  file.write_at(kHeaderSize + g0 * kGroupChars, as_bytes(text));
}

}  // namespace

SubKeyPair derive_subkeys(ByteSpan passphrase, unsigned iterations) {
  if (passphrase.size() < kMinPassphraseLength) throw Error(Errc::PassphraseTooShort);
  SubKeyPair pair(pbkdf2_sha256(passphrase, as_bytes(kMaskKeyLabel), iterations),
                  pbkdf2_sha256(passphrase, as_bytes(kBlockKeyLabel), iterations));
  // Distinct salts make equality a 2^-128 event; refuse it outright anyway.
  if (pair.mask_key == pair.block_key) throw Error(Errc::BadKey, "degenerate subkeys");
  return pair;
}

MaskStream::MaskStream(const Key128& mask_key, std::size_t period_blocks)
    : blocks_(ofb_keystream(mask_key, period_blocks)) {
  if (period_blocks == 0) throw Error(Errc::InvalidArgument, "mask period must be >= 1");
}

MaskStream generate_mask(const Key128& mask_key, std::size_t period_blocks) {
  return MaskStream(mask_key, period_blocks);
}

Block seal_block(std::uint64_t index, const Block& plain, const MaskStream& mask, const Block& iv,
                 const Key128& block_key) {
  Block b = plain;
  whiten(index, b, mask, iv);
  Aes128(block_key).encrypt(b, b);
  return b;
}

Block open_block(std::uint64_t index, const Block& cipher, const MaskStream& mask,
                 const Block& iv, const Key128& block_key) {
  Block b = cipher;
  Aes128(block_key).decrypt(b, b);
  whiten(index, b, mask, iv);
  return b;
}

void seal_blocks(std::uint64_t first_index, std::span<std::uint8_t> data, const ContentKeys& keys,
                 const Block& iv) {
  if (data.empty()) return;
  whiten(first_index, data, keys.mask, iv);
  Aes128(keys.keys.block_key).encrypt(data, data);
}

void open_blocks(std::uint64_t first_index, std::span<std::uint8_t> data, const ContentKeys& keys,
                 const Block& iv) {
  if (data.empty()) return;
  Aes128(keys.keys.block_key).decrypt(data, data);
  whiten(first_index, data, keys.mask, iv);
}

std::array<std::uint8_t, kHeaderSize> build_header(std::uint64_t plaintext_length, const Block& iv,
                                                   std::uint16_t flags) {
  std::array<std::uint8_t, kHeaderSize> out{};
  std::memcpy(out.data(), kMagic, 4);
  put_be16(out.data() + 4, kFormatVersion);
  put_be16(out.data() + 6, flags);
  put_be64(out.data() + 8, plaintext_length);
  std::memcpy(out.data() + 16, iv.data(), iv.size());
  return out;
}

FileHeader parse_header(ByteSpan bytes) {
  if (bytes.size() < kHeaderSize) throw Error(Errc::CorruptHeader, "truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error(Errc::CorruptHeader, "bad magic");
  FileHeader h;
  h.version = get_be16(bytes.data() + 4);
  if (h.version != kFormatVersion) throw Error(Errc::CorruptHeader, "unsupported version");
  h.flags = get_be16(bytes.data() + 6);
  if ((h.flags & ~kFlagAsciiPayload) != 0) throw Error(Errc::CorruptHeader, "reserved flags set");
  h.plaintext_length = get_be64(bytes.data() + 8);
  if (h.plaintext_length >= (std::uint64_t{1} << 63)) {
    throw Error(Errc::CorruptHeader, "length out of range");
  }
  std::memcpy(h.iv.data(), bytes.data() + 16, h.iv.size());
  return h;
}

std::uint64_t payload_size(std::uint64_t plaintext_length, bool ascii) {
  const std::uint64_t raw = blocks_for(plaintext_length) * kBlockSize;
  return ascii ? base64_safe_length(raw) : raw;
}

FileHeader initialize_file(const BackingFile& file, std::uint16_t flags) {
  FileHeader h;
  h.flags = flags;
  random_bytes(h.iv);
  file.truncate(0);
  file.write_at(0, build_header(0, h.iv, flags));
  return h;
}

std::optional<FileHeader> read_header(const BackingFile& file) {
  std::array<std::uint8_t, kHeaderSize> buf{};
  const std::size_t n = file.read_at(0, buf);
  if (n == 0) return std::nullopt;
  return parse_header(ByteSpan(buf.data(), n));
}

Bytes read_range(const BackingFile& file, std::uint64_t offset, std::uint64_t count,
                 const ContentKeys& keys) {
  const auto hdr = read_header(file);
  if (!hdr || offset >= hdr->plaintext_length || count == 0) return {};
  const std::uint64_t n = std::min(count, hdr->plaintext_length - offset);
  const std::uint64_t first = offset / kBlockSize;
  const std::uint64_t last = blocks_for(offset + n);
  Bytes buf = read_cipher(file, *hdr, first, last - first, blocks_for(hdr->plaintext_length));
  open_blocks(first, buf, keys, hdr->iv);
  const auto skip = static_cast<std::ptrdiff_t>(offset - first * kBlockSize);
  return Bytes(buf.begin() + skip, buf.begin() + skip + static_cast<std::ptrdiff_t>(n));
}

std::size_t write_range(const BackingFile& file, std::uint64_t offset, ByteSpan data,
                        const ContentKeys& keys, std::uint16_t new_file_flags) {
  if (data.empty()) return 0;
  if (offset >= (std::uint64_t{1} << 63) || data.size() >= (std::uint64_t{1} << 63) - offset) {
    throw Error(Errc::InvalidArgument, "write beyond maximum file size");
  }
  auto existing = read_header(file);
  FileHeader hdr = existing ? *existing : initialize_file(file, new_file_flags);

  const std::uint64_t old_len = hdr.plaintext_length;
  const std::uint64_t old_blocks = blocks_for(old_len);
  const std::uint64_t end = offset + data.size();
  // Start no later than the old EOF block so the gap gets zero-filled blocks.
  const std::uint64_t first = std::min(offset / kBlockSize, old_blocks);
  const std::uint64_t last = blocks_for(end);
  const std::uint64_t total_blocks = std::max(old_blocks, last);

  Bytes buf((last - first) * kBlockSize, 0);
  auto merge_existing = [&](std::uint64_t block) {
    if (block >= old_blocks) return;
    Bytes cur = read_cipher(file, hdr, block, 1, old_blocks);
    open_blocks(block, cur, keys, hdr.iv);
    std::copy(cur.begin(), cur.end(),
              buf.begin() + static_cast<std::ptrdiff_t>((block - first) * kBlockSize));
  };
  const std::uint64_t head_block = offset / kBlockSize;
  const std::uint64_t tail_block = (end - 1) / kBlockSize;
  if (offset % kBlockSize != 0) merge_existing(head_block);
  if (end % kBlockSize != 0 && (tail_block != head_block || offset % kBlockSize == 0)) {
    merge_existing(tail_block);
  }
  std::copy(data.begin(), data.end(),
            buf.begin() + static_cast<std::ptrdiff_t>(offset - first * kBlockSize));

  seal_blocks(first, buf, keys, hdr.iv);
  write_cipher(file, hdr, first, buf, old_blocks, total_blocks);
  if (end > old_len) {
    file.write_at(0, build_header(end, hdr.iv, hdr.flags));
  }
  return data.size();
}

}  // namespace efs::crypto
