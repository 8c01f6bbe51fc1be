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

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "crypto/content.hpp"
#include "daemon/open_file_cache.hpp"
#include "wire/protocol.hpp"

namespace efs::daemon {

struct Config {
  std::size_t cache_capacity = 16;
  std::size_t mask_blocks = crypto::kDefaultMaskBlocks;
  unsigned kdf_iterations = crypto::kDefaultKdfIterations;
  std::uint32_t readdir_page = 256;
  /// New files store their payload base-64 armored (benchmarking only).
  bool ascii_payload = false;
};

/// Identity of the process on the other end of the local channel.
struct Caller {
  uid_t uid = 0;
};

using wire::Attributes;
using wire::DirEntry;
using wire::Handle;

struct LookupResult {
  Handle handle{};
  Attributes attr;
};

struct ReaddirPage {
  std::vector<DirEntry> entries;
  std::uint64_t next_cursor = 0;
  bool eof = false;
};

/// A live binding of a backing directory to a name under the virtual root.
struct AttachPoint {
  std::uint64_t id = 0;
  std::string name;
  std::filesystem::path backing_dir;
  uid_t owner = 0;
  bool obscure = false;
  std::array<std::uint8_t, 16> secret{};
  std::shared_ptr<const crypto::ContentKeys> keys;

  // Handle -> encrypted path relative to backing_dir ("" is the root).
  mutable std::mutex table_mu;
  std::unordered_map<Handle, std::string, HandleHash> handles;

  // Striped per-file locks: writers exclusive, readers shared.
  static constexpr std::size_t kLockStripes = 64;
  mutable std::array<std::shared_mutex, kLockStripes> file_locks;

  ~AttachPoint() { secure_zero(secret.data(), secret.size()); }
};

/// The daemon's request handlers. Every call is self-contained: the handle
/// table and descriptor cache only speed things up, and losing them costs
/// STALE errors, never wrong data. All methods are safe to call concurrently.
class Service {
 public:
  explicit Service(Config config = {});
  ~Service();

  const Config& config() const noexcept { return config_; }

  /// Handle of the virtual root that lists attach points.
  static Handle virtual_root() noexcept { return Handle{}; }

  Handle attach(const std::filesystem::path& backing_dir, const std::string& attach_name,
                ByteSpan passphrase, bool obscure, Caller caller);
  void detach(const std::string& attach_name, Caller caller);
  std::vector<std::string> list_attaches(Caller caller) const;

  LookupResult lookup(const Handle& dir, const std::string& name, Caller caller);
  Attributes getattr(const Handle& handle, Caller caller);
  Bytes read(const Handle& handle, std::uint64_t offset, std::uint64_t count, Caller caller);
  std::uint64_t write(const Handle& handle, std::uint64_t offset, ByteSpan data, Caller caller);
  Handle create(const Handle& dir, const std::string& name, std::uint32_t mode, Caller caller);
  Handle mkdir(const Handle& dir, const std::string& name, std::uint32_t mode, Caller caller);
  void remove_entry(const Handle& dir, const std::string& name, Caller caller);
  void rename_entry(const Handle& src_dir, const std::string& src_name, const Handle& dst_dir,
                    const std::string& dst_name, Caller caller);
  ReaddirPage readdir(const Handle& dir, std::uint64_t cursor, std::uint32_t max_entries,
                      Caller caller);
  Handle symlink(const Handle& dir, const std::string& name, const std::string& target,
                 Caller caller);
  std::string readlink(const Handle& handle, Caller caller);

  /// Keyed-hash handle for an encrypted relative path; registers it.
  static Handle derive_handle(const AttachPoint& attach, const std::string& enc_rel_path);

  const OpenFileCache& file_cache() const noexcept { return cache_; }

 private:
  struct Resolved;

  std::shared_ptr<AttachPoint> find_attach(std::uint64_t id) const;
  Resolved resolve(const Handle& handle, Caller caller) const;
  Resolved resolve_dir(const Handle& handle, Caller caller) const;
  Handle register_path(AttachPoint& attach, const std::string& enc_rel_path);
  void forget(AttachPoint& attach, const Handle& handle);
  Attributes attributes_of(const Resolved& r);
  std::shared_ptr<OpenFile> open_file(const Resolved& r);

  Config config_;
  OpenFileCache cache_;
  mutable std::shared_mutex registry_mu_;
  std::map<std::string, std::shared_ptr<AttachPoint>> by_name_;
  std::unordered_map<std::uint64_t, std::shared_ptr<AttachPoint>> by_id_;
  std::atomic<std::uint64_t> next_id_{1};
};

}  // namespace efs::daemon
