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

#include "daemon/server.hpp"

#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "common/error.hpp"
#include "daemon/dispatch.hpp"

namespace efs::daemon {

namespace {

bool write_all(int fd, ByteSpan data) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::send(fd, data.data() + done, data.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

// false on EOF or error.
bool read_exact(int fd, std::uint8_t* out, std::size_t n) {
  std::size_t done = 0;
  while (done < n) {
    const ssize_t r = ::recv(fd, out + done, n - done, 0);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) return false;
    done += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

Server::Server(Service& service, std::filesystem::path endpoint)
    : service_(service), endpoint_(std::move(endpoint)) {}

Server::~Server() { stop(); }

void Server::start() {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (endpoint_.native().size() >= sizeof(addr.sun_path)) {
    throw Error(Errc::InvalidArgument, "endpoint path too long");
  }
  std::strcpy(addr.sun_path, endpoint_.c_str());
  listen_fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw Error(Errc::Io, std::string("socket: ") + std::strerror(errno));
  ::unlink(endpoint_.c_str());
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 64) != 0) {
    const int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(Errc::Io, std::string("bind ") + endpoint_.string() + ": " + std::strerror(err));
  }
  // Any local user may connect; each request is checked against its uid.
  ::chmod(endpoint_.c_str(), 0666);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  {
    std::lock_guard lock(conn_mu_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  workers_.clear();
  listen_fd_ = -1;
  ::unlink(endpoint_.c_str());
}

void Server::accept_loop() {
  while (running_) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    std::lock_guard lock(conn_mu_);
    if (!running_) {
      ::close(fd);
      break;
    }
    conn_fds_.insert(fd);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void Server::serve(int fd) {
  ucred cred{};
  socklen_t len = sizeof(cred);
  if (::getsockopt(fd, SOL_SOCKET, SO_PEERCRED, &cred, &len) == 0) {
    const Caller caller{cred.uid};
    Bytes frame;
    for (;;) {
      std::uint8_t prefix[4];
      if (!read_exact(fd, prefix, sizeof(prefix))) break;
      const std::uint32_t body = get_be32(prefix);
      if (body > wire::kMaxFrameLength) {
        // No way to find the next frame boundary: answer once and hang up.
        frame.assign(prefix, prefix + 4);
        std::uint8_t xid[4] = {};
        if (read_exact(fd, xid, 4)) frame.insert(frame.end(), xid, xid + 4);
        write_all(fd, wire::encode_response(wire::bad_message_response(frame)));
        break;
      }
      frame.resize(4 + body);
      std::memcpy(frame.data(), prefix, 4);
      if (!read_exact(fd, frame.data() + 4, body)) break;
      const Bytes reply = handle_frame(service_, frame, caller);
      if (frame.size() >= 10 &&
          get_be16(frame.data() + 8) == static_cast<std::uint16_t>(wire::Opcode::Attach)) {
        secure_zero(frame.data(), frame.size());
      }
      if (!write_all(fd, reply)) break;
    }
  }
  std::lock_guard lock(conn_mu_);
  conn_fds_.erase(fd);
  ::close(fd);
}

}  // namespace efs::daemon
