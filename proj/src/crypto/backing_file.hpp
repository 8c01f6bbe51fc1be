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

#include <cstdint>
#include <filesystem>
#include <span>

#include "common/bytes.hpp"

namespace efs {

/// Owned POSIX descriptor for a file in the backing directory.
class BackingFile {
 public:
  BackingFile() = default;
  explicit BackingFile(int fd) noexcept : fd_(fd) {}
  ~BackingFile();
  BackingFile(BackingFile&& other) noexcept : fd_(other.release()) {}
  BackingFile& operator=(BackingFile&& other) noexcept;
  BackingFile(const BackingFile&) = delete;
  BackingFile& operator=(const BackingFile&) = delete;

  /// Opens read-write. Throws Error(Io) on failure.
  static BackingFile open(const std::filesystem::path& path);
  /// Creates a new file exclusively (O_EXCL). Throws Error(Exists) if present.
  static BackingFile create(const std::filesystem::path& path, unsigned mode);

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }

  std::uint64_t size() const;
  /// Reads up to out.size() bytes; returns bytes read (short only at EOF).
  std::size_t read_at(std::uint64_t offset, std::span<std::uint8_t> out) const;
  void write_at(std::uint64_t offset, ByteSpan data) const;
  void truncate(std::uint64_t size) const;

 private:
  int fd_ = -1;
};

}  // namespace efs
