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

#include "daemon/open_file_cache.hpp"

#include <sys/stat.h>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace efs::daemon {

std::shared_ptr<OpenFile> OpenFileCache::acquire(const wire::Handle& handle,
                                                 const std::filesystem::path& path, dev_t dev,
                                                 ino_t ino) {
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(handle); it != entries_.end()) {
      if (it->second.file->dev == dev && it->second.file->ino == ino) {
        ++hits_;
        lru_.splice(lru_.begin(), lru_, it->second.lru);
        return it->second.file;
      }
      lru_.erase(it->second.lru);
      entries_.erase(it);
    }
    ++misses_;
  }

  auto opened = std::make_shared<OpenFile>();
  opened->file = BackingFile::open(path);
  struct stat st {};
  if (::fstat(opened->file.fd(), &st) != 0) throw Error(Errc::Io, "fstat");
  opened->dev = st.st_dev;
  opened->ino = st.st_ino;
  if (opened->dev != dev || opened->ino != ino) throw Error(Errc::Stale, "file replaced");
  if (capacity_ == 0) return opened;

  std::lock_guard lock(mu_);
  if (auto it = entries_.find(handle); it != entries_.end()) {
    lru_.erase(it->second.lru);
    entries_.erase(it);
  }
  while (entries_.size() >= capacity_) evict_oldest_locked();
  lru_.push_front(handle);
  entries_.emplace(handle, Entry{opened, lru_.begin()});
  return opened;
}

void OpenFileCache::erase(const wire::Handle& handle) {
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(handle); it != entries_.end()) {
    lru_.erase(it->second.lru);
    entries_.erase(it);
  }
}

void OpenFileCache::erase_attach(std::uint64_t attach_id) {
  std::lock_guard lock(mu_);
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (get_be64(it->first.data()) == attach_id) {
      lru_.erase(it->second.lru);
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

void OpenFileCache::evict_oldest_locked() {
  if (lru_.empty()) return;
  entries_.erase(lru_.back());
  lru_.pop_back();
}

std::size_t OpenFileCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::uint64_t OpenFileCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::uint64_t OpenFileCache::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

}  // namespace efs::daemon
