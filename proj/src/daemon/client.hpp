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
#include <stdexcept>
#include <string>
#include <vector>

#include "wire/protocol.hpp"

namespace efs::daemon {

/// A non-OK status returned by the daemon.
class RpcError : public std::runtime_error {
 public:
  explicit RpcError(wire::RpcStatus status)
      : std::runtime_error(wire::status_name(status)), status_(status) {}
  wire::RpcStatus status() const noexcept { return status_; }

 private:
  wire::RpcStatus status_;
};

/// Blocking client for the daemon's Unix-domain endpoint. One request in
/// flight at a time; not thread-safe.
class Client {
 public:
  explicit Client(const std::filesystem::path& endpoint);
  ~Client();
  Client(Client&& other) noexcept;
  Client& operator=(Client&&) = delete;
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  /// Sends a raw frame and returns the raw reply frame.
  Bytes exchange(ByteSpan frame);
  /// Sends a request (xid assigned here) and checks that the reply echoes it.
  wire::Response call(wire::RequestBody body);

  wire::Handle attach(const std::string& backing_dir, const std::string& name, ByteSpan passphrase,
                      bool obscure = false);
  void detach(const std::string& name);
  std::vector<std::string> list_attaches();
  wire::LookupReply lookup(const wire::Handle& dir, const std::string& name);
  wire::Attributes getattr(const wire::Handle& handle);
  Bytes read(const wire::Handle& handle, std::uint64_t offset, std::uint64_t count);
  std::uint64_t write(const wire::Handle& handle, std::uint64_t offset, ByteSpan data);
  wire::Handle create(const wire::Handle& dir, const std::string& name, std::uint32_t mode = 0644);
  wire::Handle mkdir(const wire::Handle& dir, const std::string& name, std::uint32_t mode = 0755);
  void remove(const wire::Handle& dir, const std::string& name);
  void rename(const wire::Handle& src_dir, const std::string& src_name,
              const wire::Handle& dst_dir, const std::string& dst_name);
  wire::ReaddirReply readdir_page(const wire::Handle& dir, std::uint64_t cursor,
                                  std::uint32_t max_entries = 0);
  /// Follows cursors to the end.
  std::vector<wire::DirEntry> readdir(const wire::Handle& dir);
  wire::Handle symlink(const wire::Handle& dir, const std::string& name, const std::string& target);
  std::string readlink(const wire::Handle& handle);

  /// Whole-file helpers that split I/O into protocol-sized chunks.
  Bytes read_all(const wire::Handle& handle);
  void write_all(const wire::Handle& handle, std::uint64_t offset, ByteSpan data);

 private:
  template <class Reply>
  Reply expect(wire::RequestBody body);

  int fd_ = -1;
  std::uint32_t next_xid_ = 1;
};

}  // namespace efs::daemon
