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

#include <atomic>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "daemon/service.hpp"

namespace efs::daemon {

/// Serves the wire protocol on a Unix-domain socket. Caller identity comes
/// from the peer credentials of each connection; nothing is accepted from
/// outside the local machine.
class Server {
 public:
  Server(Service& service, std::filesystem::path endpoint);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts the accept loop. Replaces a stale socket file.
  void start();
  /// Closes the listener and every connection, then joins all threads.
  void stop();

  const std::filesystem::path& endpoint() const noexcept { return endpoint_; }

 private:
  void accept_loop();
  void serve(int fd);

  Service& service_;
  std::filesystem::path endpoint_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex conn_mu_;
  std::set<int> conn_fds_;
  std::vector<std::thread> workers_;
};

}  // namespace efs::daemon
