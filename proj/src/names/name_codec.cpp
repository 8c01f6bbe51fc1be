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

#include "names/name_codec.hpp"

#include <algorithm>

#include "common/encoding.hpp"
#include "common/error.hpp"

namespace efs::names {

namespace {

const Block kNoIv{};

std::uint16_t byte_sum(ByteSpan bytes) {
  std::uint32_t sum = 0;
  for (std::uint8_t b : bytes) sum += b;
  return static_cast<std::uint16_t>(sum & 0xFFFF);
}

void check_length(std::string_view s, std::size_t max) {
  if (s.empty()) throw Error(Errc::EmptyName);
  if (s.size() > max) throw Error(Errc::NameTooLong);
}

std::string seal_record(std::string_view text, const crypto::ContentKeys& keys) {
  const std::size_t padded = (2 + text.size() + kBlockSize - 1) / kBlockSize * kBlockSize;
  Bytes record(padded, 0);
  put_be16(record.data(), byte_sum(as_bytes(text)));
  std::copy(text.begin(), text.end(), record.begin() + 2);
  crypto::seal_blocks(0, record, keys, kNoIv);
  std::string out = encode_component(record);
  secure_zero(record.data(), record.size());
  return out;
}

std::string open_record(std::string_view encoded, const crypto::ContentKeys& keys,
                        std::size_t max_len, bool allow_slash) {
  Bytes record;
  try {
    record = decode_component(encoded);
  } catch (const Error&) {
    throw Error(Errc::NotAnEfsName, "undecodable");
  }
  if (record.empty() || record.size() % kBlockSize != 0 ||
      record.size() > (2 + max_len + kBlockSize - 1) / kBlockSize * kBlockSize) {
    throw Error(Errc::NotAnEfsName, "bad record length");
  }
  crypto::open_blocks(0, record, keys, kNoIv);
  auto end = record.end();
  while (end != record.begin() + 2 && *(end - 1) == 0) --end;
  std::string text(record.begin() + 2, end);
  const std::uint16_t stored = get_be16(record.data());
  secure_zero(record.data(), record.size());
  // Padding must be shorter than one block and the cleartext well formed.
  const std::size_t expect = (2 + text.size() + kBlockSize - 1) / kBlockSize * kBlockSize;
  if (text.empty() || text.size() > max_len || expect != record.size() ||
      stored != byte_sum(as_bytes(text)) ||
      (!allow_slash && (text.find('/') != std::string::npos || is_dot_entry(text))) ||
      text.find('\0') != std::string::npos) {
    throw Error(Errc::ChecksumMismatch);
  }
  return text;
}

}  // namespace

std::uint16_t name_checksum(ByteSpan name) {
  if (name.empty()) throw Error(Errc::EmptyName);
  if (name.size() > kMaxNameLength) throw Error(Errc::NameTooLong);
  return byte_sum(name);
}

std::string encode_component(ByteSpan raw) { return encode_base64_safe(raw); }

Bytes decode_component(std::string_view text) { return decode_base64_safe(text); }

std::string seal_name(std::string_view name, const crypto::ContentKeys& keys) {
  check_length(name, kMaxNameLength);
  if (is_dot_entry(name) || name.find('/') != std::string_view::npos ||
      name.find('\0') != std::string_view::npos) {
    throw Error(Errc::InvalidName);
  }
  return seal_record(name, keys);
}

std::string open_name(std::string_view encoded, const crypto::ContentKeys& keys) {
  return open_record(encoded, keys, kMaxNameLength, false);
}

std::string seal_link_target(std::string_view target, const crypto::ContentKeys& keys) {
  check_length(target, kMaxLinkTargetLength);
  if (target.find('\0') != std::string_view::npos) throw Error(Errc::InvalidName);
  return seal_record(target, keys);
}

std::string open_link_target(std::string_view encoded, const crypto::ContentKeys& keys) {
  return open_record(encoded, keys, kMaxLinkTargetLength, true);
}

}  // namespace efs::names
