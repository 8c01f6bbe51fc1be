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

// Request frame:  frame_len u32 | xid u32 | opcode u16 | version u16 | payload
// Response frame: frame_len u32 | xid u32 | opcode u16 | version u16 | status u16 | body
// frame_len counts the bytes after itself. All integers big-endian; strings
// carry a u16 length prefix; file data a u32 length prefix; handles are 32
// raw bytes. A non-OK response has an empty body.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "common/bytes.hpp"

namespace efs::wire {

inline constexpr std::uint16_t kProtocolVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 12;  // frame_len + xid + opcode + version
inline constexpr std::uint32_t kMaxFrameLength = 16u << 20;
inline constexpr std::uint32_t kMaxIoChunk = 8u << 20;

enum class Opcode : std::uint16_t {
  Attach = 1,
  Detach = 2,
  Lookup = 3,
  Getattr = 4,
  Read = 5,
  Write = 6,
  Create = 7,
  Mkdir = 8,
  Remove = 9,
  Rename = 10,
  Readdir = 11,
  Symlink = 12,
  Readlink = 13,
  ListAttaches = 14,
};

enum class RpcStatus : std::uint16_t {
  Ok = 0,
  NoEnt = 1,
  Acces = 2,
  BadKey = 3,
  Stale = 4,
  Io = 5,
  Exist = 6,
  NotDir = 7,
  IsDir = 8,
  NameTooLong = 9,
  NotEmpty = 10,
  CrossAttach = 11,
  BadMsg = 12,
};

const char* status_name(RpcStatus status) noexcept;

using Handle = std::array<std::uint8_t, 32>;

enum class FileKind : std::uint8_t { Other = 0, Regular = 1, Directory = 2, Symlink = 3 };

struct Attributes {
  FileKind kind = FileKind::Other;
  std::uint32_t mode = 0;
  std::uint64_t size = 0;
  std::uint64_t atime_ns = 0;
  std::uint64_t mtime_ns = 0;
  std::uint64_t ctime_ns = 0;
  bool operator==(const Attributes&) const = default;
};

struct DirEntry {
  std::string name;
  FileKind kind = FileKind::Other;
  bool operator==(const DirEntry&) const = default;
};

// --- requests ---------------------------------------------------------------

struct AttachRequest {
  std::string backing_dir;
  std::string attach_name;
  Bytes passphrase;
  bool obscure = false;
  bool operator==(const AttachRequest&) const = default;
};
struct DetachRequest {
  std::string attach_name;
  bool operator==(const DetachRequest&) const = default;
};
struct LookupRequest {
  Handle dir{};
  std::string name;
  bool operator==(const LookupRequest&) const = default;
};
struct GetattrRequest {
  Handle handle{};
  bool operator==(const GetattrRequest&) const = default;
};
struct ReadRequest {
  Handle handle{};
  std::uint64_t offset = 0;
  std::uint64_t count = 0;
  bool operator==(const ReadRequest&) const = default;
};
struct WriteRequest {
  Handle handle{};
  std::uint64_t offset = 0;
  Bytes data;
  bool operator==(const WriteRequest&) const = default;
};
struct CreateRequest {
  Handle dir{};
  std::string name;
  std::uint32_t mode = 0;
  bool operator==(const CreateRequest&) const = default;
};
struct MkdirRequest {
  Handle dir{};
  std::string name;
  std::uint32_t mode = 0;
  bool operator==(const MkdirRequest&) const = default;
};
struct RemoveRequest {
  Handle dir{};
  std::string name;
  bool operator==(const RemoveRequest&) const = default;
};
struct RenameRequest {
  Handle src_dir{};
  std::string src_name;
  Handle dst_dir{};
  std::string dst_name;
  bool operator==(const RenameRequest&) const = default;
};
struct ReaddirRequest {
  Handle dir{};
  std::uint64_t cursor = 0;
  std::uint32_t max_entries = 0;  // 0: server default
  bool operator==(const ReaddirRequest&) const = default;
};
struct SymlinkRequest {
  Handle dir{};
  std::string name;
  std::string target;
  bool operator==(const SymlinkRequest&) const = default;
};
struct ReadlinkRequest {
  Handle handle{};
  bool operator==(const ReadlinkRequest&) const = default;
};
struct ListAttachesRequest {
  bool operator==(const ListAttachesRequest&) const = default;
};

// Alternative index + 1 == opcode.
using RequestBody =
    std::variant<AttachRequest, DetachRequest, LookupRequest, GetattrRequest, ReadRequest,
                 WriteRequest, CreateRequest, MkdirRequest, RemoveRequest, RenameRequest,
                 ReaddirRequest, SymlinkRequest, ReadlinkRequest, ListAttachesRequest>;

struct Request {
  std::uint32_t xid = 0;
  RequestBody body;

  Opcode opcode() const { return static_cast<Opcode>(body.index() + 1); }
  bool operator==(const Request&) const = default;
};

// --- responses --------------------------------------------------------------

struct EmptyReply {
  bool operator==(const EmptyReply&) const = default;
};
struct HandleReply {
  Handle handle{};
  bool operator==(const HandleReply&) const = default;
};
struct LookupReply {
  Handle handle{};
  Attributes attr;
  bool operator==(const LookupReply&) const = default;
};
struct AttrReply {
  Attributes attr;
  bool operator==(const AttrReply&) const = default;
};
struct ReadReply {
  Bytes data;
  bool operator==(const ReadReply&) const = default;
};
struct WriteReply {
  std::uint64_t count = 0;
  bool operator==(const WriteReply&) const = default;
};
struct ReaddirReply {
  std::vector<DirEntry> entries;
  std::uint64_t next_cursor = 0;
  bool eof = false;
  bool operator==(const ReaddirReply&) const = default;
};
struct ReadlinkReply {
  std::string target;
  bool operator==(const ReadlinkReply&) const = default;
};
struct ListAttachesReply {
  std::vector<std::string> names;
  bool operator==(const ListAttachesReply&) const = default;
};

using ResponseBody = std::variant<EmptyReply, HandleReply, LookupReply, AttrReply, ReadReply,
                                  WriteReply, ReaddirReply, ReadlinkReply, ListAttachesReply>;

struct Response {
  std::uint32_t xid = 0;
  std::uint16_t opcode = 0;  // echoes the request; 0 when the request was unparseable
  RpcStatus status = RpcStatus::Ok;
  ResponseBody body;
  bool operator==(const Response&) const = default;
};

/// Full frame including the length prefix.
Bytes encode_request(const Request& request);
/// `frame` must be exactly one frame including the length prefix. Throws
/// Error(BadMessage) on any malformation, including trailing bytes.
Request decode_request(ByteSpan frame);

Bytes encode_response(const Response& response);
Response decode_response(ByteSpan frame);

/// Response for a frame that failed to decode: echoes whatever xid is legible.
Response bad_message_response(ByteSpan frame);

/// Total size of the frame at the start of `buffered` once its length prefix
/// is available; nullopt while fewer than 4 bytes are buffered.
std::optional<std::uint64_t> frame_size(ByteSpan buffered);

}  // namespace efs::wire
