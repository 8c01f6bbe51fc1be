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

#include "daemon/client.hpp"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "common/error.hpp"

namespace efs::daemon {

Client::Client(const std::filesystem::path& endpoint) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (endpoint.native().size() >= sizeof(addr.sun_path)) {
    throw Error(Errc::InvalidArgument, "endpoint path too long");
  }
  std::strcpy(addr.sun_path, endpoint.c_str());
  fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw Error(Errc::Io, std::string("socket: ") + std::strerror(errno));
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const int err = errno;
    ::close(fd_);
    fd_ = -1;
    throw Error(Errc::Io, "cannot reach daemon at " + endpoint.string() + ": " + std::strerror(err));
  }
}

Client::~Client() {
  if (fd_ >= 0) ::close(fd_);
}

Client::Client(Client&& other) noexcept : fd_(other.fd_), next_xid_(other.next_xid_) {
  other.fd_ = -1;
}

Bytes Client::exchange(ByteSpan frame) {
  std::size_t done = 0;
  while (done < frame.size()) {
    const ssize_t n = ::send(fd_, frame.data() + done, frame.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::Io, std::string("send: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  auto recv_exact = [&](std::uint8_t* out, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
      const ssize_t n = ::recv(fd_, out + got, len - got, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw Error(Errc::Io, "daemon closed the connection");
      got += static_cast<std::size_t>(n);
    }
  };
  std::uint8_t prefix[4];
  recv_exact(prefix, 4);
  const std::uint32_t len = get_be32(prefix);
  if (len > wire::kMaxFrameLength) throw Error(Errc::BadMessage, "oversized reply");
  Bytes reply(4 + len);
  std::memcpy(reply.data(), prefix, 4);
  recv_exact(reply.data() + 4, len);
  return reply;
}

wire::Response Client::call(wire::RequestBody body) {
  wire::Request req{next_xid_++, std::move(body)};
  Bytes frame = wire::encode_request(req);
  if (auto* a = std::get_if<wire::AttachRequest>(&req.body)) {
    secure_zero(a->passphrase.data(), a->passphrase.size());
  }
  Bytes reply;
  try {
    reply = exchange(frame);
  } catch (...) {
    secure_zero(frame.data(), frame.size());
    throw;
  }
  secure_zero(frame.data(), frame.size());
  wire::Response resp = wire::decode_response(reply);
  if (resp.xid != req.xid) throw Error(Errc::BadMessage, "reply xid mismatch");
  return resp;
}

template <class Reply>
Reply Client::expect(wire::RequestBody body) {
  wire::Response resp = call(std::move(body));
  if (resp.status != wire::RpcStatus::Ok) throw RpcError(resp.status);
  auto* reply = std::get_if<Reply>(&resp.body);
  if (reply == nullptr) throw Error(Errc::BadMessage, "unexpected reply type");
  return std::move(*reply);
}

wire::Handle Client::attach(const std::string& backing_dir, const std::string& name,
                            ByteSpan passphrase, bool obscure) {
  return expect<wire::HandleReply>(wire::AttachRequest{
                                       backing_dir, name, Bytes(passphrase.begin(), passphrase.end()),
                                       obscure})
      .handle;
}

void Client::detach(const std::string& name) { expect<wire::EmptyReply>(wire::DetachRequest{name}); }

std::vector<std::string> Client::list_attaches() {
  return expect<wire::ListAttachesReply>(wire::ListAttachesRequest{}).names;
}

wire::LookupReply Client::lookup(const wire::Handle& dir, const std::string& name) {
  return expect<wire::LookupReply>(wire::LookupRequest{dir, name});
}

wire::Attributes Client::getattr(const wire::Handle& handle) {
  return expect<wire::AttrReply>(wire::GetattrRequest{handle}).attr;
}

Bytes Client::read(const wire::Handle& handle, std::uint64_t offset, std::uint64_t count) {
  return expect<wire::ReadReply>(wire::ReadRequest{handle, offset, count}).data;
}

std::uint64_t Client::write(const wire::Handle& handle, std::uint64_t offset, ByteSpan data) {
  return expect<wire::WriteReply>(
             wire::WriteRequest{handle, offset, Bytes(data.begin(), data.end())})
      .count;
}

wire::Handle Client::create(const wire::Handle& dir, const std::string& name, std::uint32_t mode) {
  return expect<wire::HandleReply>(wire::CreateRequest{dir, name, mode}).handle;
}

wire::Handle Client::mkdir(const wire::Handle& dir, const std::string& name, std::uint32_t mode) {
  return expect<wire::HandleReply>(wire::MkdirRequest{dir, name, mode}).handle;
}

void Client::remove(const wire::Handle& dir, const std::string& name) {
  expect<wire::EmptyReply>(wire::RemoveRequest{dir, name});
}

void Client::rename(const wire::Handle& src_dir, const std::string& src_name,
                    const wire::Handle& dst_dir, const std::string& dst_name) {
  expect<wire::EmptyReply>(wire::RenameRequest{src_dir, src_name, dst_dir, dst_name});
}

wire::ReaddirReply Client::readdir_page(const wire::Handle& dir, std::uint64_t cursor,
                                        std::uint32_t max_entries) {
  return expect<wire::ReaddirReply>(wire::ReaddirRequest{dir, cursor, max_entries});
}

std::vector<wire::DirEntry> Client::readdir(const wire::Handle& dir) {
  std::vector<wire::DirEntry> all;
  std::uint64_t cursor = 0;
  for (;;) {
    auto page = readdir_page(dir, cursor);
    all.insert(all.end(), page.entries.begin(), page.entries.end());
    if (page.eof) break;
    cursor = page.next_cursor;
  }
  return all;
}

wire::Handle Client::symlink(const wire::Handle& dir, const std::string& name,
                             const std::string& target) {
  return expect<wire::HandleReply>(wire::SymlinkRequest{dir, name, target}).handle;
}

std::string Client::readlink(const wire::Handle& handle) {
  return expect<wire::ReadlinkReply>(wire::ReadlinkRequest{handle}).target;
}

Bytes Client::read_all(const wire::Handle& handle) {
  Bytes out;
  for (;;) {
    Bytes chunk = read(handle, out.size(), wire::kMaxIoChunk);
    if (chunk.empty()) break;
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  return out;
}

void Client::write_all(const wire::Handle& handle, std::uint64_t offset, ByteSpan data) {
  std::size_t done = 0;
  while (done < data.size()) {
    const std::size_t n = std::min<std::size_t>(data.size() - done, wire::kMaxIoChunk);
    write(handle, offset + done, data.subspan(done, n));
    done += n;
  }
}

}  // namespace efs::daemon
