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

#include <sys/types.h>

#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "crypto/backing_file.hpp"
#include "wire/protocol.hpp"

namespace efs::daemon {

struct HandleHash {
  std::size_t operator()(const wire::Handle& h) const noexcept {
    std::size_t v = 0;
    for (std::size_t i = 8; i < 16; ++i) v = (v << 8) | h[i];
    return v;
  }
};

/// An open backing file, tagged with the inode it was opened on.
struct OpenFile {
  BackingFile file;
  dev_t dev = 0;
  ino_t ino = 0;
};

/// Small LRU of open descriptors keyed by file handle. Entries are shared so
/// an evicted descriptor stays open until in-flight users drop it.
class OpenFileCache {
 public:
  explicit OpenFileCache(std::size_t capacity) : capacity_(capacity) {}

  /// Returns a descriptor for `path`, reusing the cached one only if it still
  /// refers to inode (dev, ino).
  std::shared_ptr<OpenFile> acquire(const wire::Handle& handle, const std::filesystem::path& path,
                                    dev_t dev, ino_t ino);

  void erase(const wire::Handle& handle);
  /// Drops every entry whose handle carries this attach id.
  void erase_attach(std::uint64_t attach_id);

  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }
  std::uint64_t hits() const;
  std::uint64_t misses() const;

 private:
  struct Entry {
    std::shared_ptr<OpenFile> file;
    std::list<wire::Handle>::iterator lru;
  };

  void evict_oldest_locked();

  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<wire::Handle> lru_;  // front = most recent
  std::unordered_map<wire::Handle, Entry, HandleHash> entries_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace efs::daemon
