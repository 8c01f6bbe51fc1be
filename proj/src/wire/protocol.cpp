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

#include "wire/protocol.hpp"

#include <cstring>

#include "common/error.hpp"

namespace efs::wire {

namespace {

class Writer {
 public:
  Writer() { out_.resize(4); }  // frame_len placeholder

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { append_be(v, 2); }
  void u32(std::uint32_t v) { append_be(v, 4); }
  void u64(std::uint64_t v) { append_be(v, 8); }
  void handle(const Handle& h) { out_.insert(out_.end(), h.begin(), h.end()); }
  void str(std::string_view s) {
    if (s.size() > 0xFFFF) throw Error(Errc::InvalidArgument, "string too long for frame");
    u16(static_cast<std::uint16_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void blob16(ByteSpan b) {
    if (b.size() > 0xFFFF) throw Error(Errc::InvalidArgument, "field too long for frame");
    u16(static_cast<std::uint16_t>(b.size()));
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void blob32(ByteSpan b) {
    if (b.size() > kMaxIoChunk) throw Error(Errc::InvalidArgument, "data chunk too large");
    u32(static_cast<std::uint32_t>(b.size()));
    out_.insert(out_.end(), b.begin(), b.end());
  }

  Bytes finish() && {
    const std::size_t len = out_.size() - 4;
    if (len > kMaxFrameLength) throw Error(Errc::InvalidArgument, "frame too large");
    put_be32(out_.data(), static_cast<std::uint32_t>(len));
    return std::move(out_);
  }

 private:
  void append_be(std::uint64_t v, int n) {
    for (int i = n - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteSpan in) : in_(in) {}

  std::uint8_t u8() { return *take(1); }
  std::uint16_t u16() { return get_be16(take(2)); }
  std::uint32_t u32() { return get_be32(take(4)); }
  std::uint64_t u64() { return get_be64(take(8)); }
  Handle handle() {
    Handle h;
    std::memcpy(h.data(), take(h.size()), h.size());
    return h;
  }
  std::string str() {
    const std::uint16_t n = u16();
    const auto* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  Bytes blob16() {
    const std::uint16_t n = u16();
    const auto* p = take(n);
    return Bytes(p, p + n);
  }
  Bytes blob32() {
    const std::uint32_t n = u32();
    if (n > kMaxIoChunk) throw Error(Errc::BadMessage, "data chunk too large");
    const auto* p = take(n);
    return Bytes(p, p + n);
  }
  bool boolean() {
    const std::uint8_t v = u8();
    if (v > 1) throw Error(Errc::BadMessage, "bad boolean");
    return v == 1;
  }
  void expect_end() const {
    if (pos_ != in_.size()) throw Error(Errc::BadMessage, "trailing bytes");
  }

 private:
  const std::uint8_t* take(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(Errc::BadMessage, "truncated field");
    const auto* p = in_.data() + pos_;
    pos_ += n;
    return p;
  }
  ByteSpan in_;
  std::size_t pos_ = 0;
};

void put_attr(Writer& w, const Attributes& a) {
  w.u8(static_cast<std::uint8_t>(a.kind));
  w.u32(a.mode);
  w.u64(a.size);
  w.u64(a.atime_ns);
  w.u64(a.mtime_ns);
  w.u64(a.ctime_ns);
}

FileKind get_kind(Reader& r) {
  const std::uint8_t k = r.u8();
  if (k > static_cast<std::uint8_t>(FileKind::Symlink)) throw Error(Errc::BadMessage, "bad kind");
  return static_cast<FileKind>(k);
}

Attributes get_attr(Reader& r) {
  Attributes a;
  a.kind = get_kind(r);
  a.mode = r.u32();
  a.size = r.u64();
  a.atime_ns = r.u64();
  a.mtime_ns = r.u64();
  a.ctime_ns = r.u64();
  return a;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Validates the common prefix; returns a reader positioned after `version`.
Reader open_frame(ByteSpan frame, std::uint32_t& xid, std::uint16_t& opcode) {
  if (frame.size() < kFrameHeaderSize) throw Error(Errc::BadMessage, "short frame");
  const std::uint32_t len = get_be32(frame.data());
  if (len != frame.size() - 4 || len > kMaxFrameLength) {
    throw Error(Errc::BadMessage, "length mismatch");
  }
  xid = get_be32(frame.data() + 4);
  opcode = get_be16(frame.data() + 8);
  if (get_be16(frame.data() + 10) != kProtocolVersion) {
    throw Error(Errc::BadMessage, "unsupported version");
  }
  return Reader(frame.subspan(kFrameHeaderSize));
}

}  // namespace

const char* status_name(RpcStatus status) noexcept {
  switch (status) {
    case RpcStatus::Ok: return "OK";
    case RpcStatus::NoEnt: return "NOENT";
    case RpcStatus::Acces: return "ACCES";
    case RpcStatus::BadKey: return "BADKEY";
    case RpcStatus::Stale: return "STALE";
    case RpcStatus::Io: return "IO";
    case RpcStatus::Exist: return "EXIST";
    case RpcStatus::NotDir: return "NOTDIR";
    case RpcStatus::IsDir: return "ISDIR";
    case RpcStatus::NameTooLong: return "NAMETOOLONG";
    case RpcStatus::NotEmpty: return "NOTEMPTY";
    case RpcStatus::CrossAttach: return "CROSSATTACH";
    case RpcStatus::BadMsg: return "BADMSG";
  }
  return "UNKNOWN";
}

Bytes encode_request(const Request& request) {
  Writer w;
  w.u32(request.xid);
  w.u16(static_cast<std::uint16_t>(request.opcode()));
  w.u16(kProtocolVersion);
  std::visit(Overloaded{
                 [&](const AttachRequest& m) {
                   w.str(m.backing_dir);
                   w.str(m.attach_name);
                   w.blob16(m.passphrase);
                   w.u8(m.obscure ? 1 : 0);
                 },
                 [&](const DetachRequest& m) { w.str(m.attach_name); },
                 [&](const LookupRequest& m) {
                   w.handle(m.dir);
                   w.str(m.name);
                 },
                 [&](const GetattrRequest& m) { w.handle(m.handle); },
                 [&](const ReadRequest& m) {
                   w.handle(m.handle);
                   w.u64(m.offset);
                   w.u64(m.count);
                 },
                 [&](const WriteRequest& m) {
                   w.handle(m.handle);
                   w.u64(m.offset);
                   w.blob32(m.data);
                 },
                 [&](const CreateRequest& m) {
                   w.handle(m.dir);
                   w.str(m.name);
                   w.u32(m.mode);
                 },
                 [&](const MkdirRequest& m) {
                   w.handle(m.dir);
                   w.str(m.name);
                   w.u32(m.mode);
                 },
                 [&](const RemoveRequest& m) {
                   w.handle(m.dir);
                   w.str(m.name);
                 },
                 [&](const RenameRequest& m) {
                   w.handle(m.src_dir);
                   w.str(m.src_name);
                   w.handle(m.dst_dir);
                   w.str(m.dst_name);
                 },
                 [&](const ReaddirRequest& m) {
                   w.handle(m.dir);
                   w.u64(m.cursor);
                   w.u32(m.max_entries);
                 },
                 [&](const SymlinkRequest& m) {
                   w.handle(m.dir);
                   w.str(m.name);
                   w.str(m.target);
                 },
                 [&](const ReadlinkRequest& m) { w.handle(m.handle); },
                 [&](const ListAttachesRequest&) {},
             },
             request.body);
  return std::move(w).finish();
}

Request decode_request(ByteSpan frame) {
  Request req;
  std::uint16_t op = 0;
  Reader r = open_frame(frame, req.xid, op);
  switch (static_cast<Opcode>(op)) {
    case Opcode::Attach: {
      AttachRequest m;
      m.backing_dir = r.str();
      m.attach_name = r.str();
      m.passphrase = r.blob16();
      m.obscure = r.boolean();
      req.body = std::move(m);
      break;
    }
    case Opcode::Detach: req.body = DetachRequest{r.str()}; break;
    case Opcode::Lookup: {
      LookupRequest m;
      m.dir = r.handle();
      m.name = r.str();
      req.body = std::move(m);
      break;
    }
    case Opcode::Getattr: req.body = GetattrRequest{r.handle()}; break;
    case Opcode::Read: {
      ReadRequest m;
      m.handle = r.handle();
      m.offset = r.u64();
      m.count = r.u64();
      req.body = m;
      break;
    }
    case Opcode::Write: {
      WriteRequest m;
      m.handle = r.handle();
      m.offset = r.u64();
      m.data = r.blob32();
      req.body = std::move(m);
      break;
    }
    case Opcode::Create:
    case Opcode::Mkdir: {
      Handle dir = r.handle();
      std::string name = r.str();
      std::uint32_t mode = r.u32();
      if (static_cast<Opcode>(op) == Opcode::Create) {
        req.body = CreateRequest{dir, std::move(name), mode};
      } else {
        req.body = MkdirRequest{dir, std::move(name), mode};
      }
      break;
    }
    case Opcode::Remove: {
      RemoveRequest m;
      m.dir = r.handle();
      m.name = r.str();
      req.body = std::move(m);
      break;
    }
    case Opcode::Rename: {
      RenameRequest m;
      m.src_dir = r.handle();
      m.src_name = r.str();
      m.dst_dir = r.handle();
      m.dst_name = r.str();
      req.body = std::move(m);
      break;
    }
    case Opcode::Readdir: {
      ReaddirRequest m;
      m.dir = r.handle();
      m.cursor = r.u64();
      m.max_entries = r.u32();
      req.body = m;
      break;
    }
    case Opcode::Symlink: {
      SymlinkRequest m;
      m.dir = r.handle();
      m.name = r.str();
      m.target = r.str();
      req.body = std::move(m);
      break;
    }
    case Opcode::Readlink: req.body = ReadlinkRequest{r.handle()}; break;
    case Opcode::ListAttaches: req.body = ListAttachesRequest{}; break;
    default: throw Error(Errc::BadMessage, "unknown opcode");
  }
  r.expect_end();
  return req;
}

Bytes encode_response(const Response& response) {
  Writer w;
  w.u32(response.xid);
  w.u16(response.opcode);
  w.u16(kProtocolVersion);
  w.u16(static_cast<std::uint16_t>(response.status));
  if (response.status != RpcStatus::Ok) return std::move(w).finish();
  std::visit(Overloaded{
                 [&](const EmptyReply&) {},
                 [&](const HandleReply& m) { w.handle(m.handle); },
                 [&](const LookupReply& m) {
                   w.handle(m.handle);
                   put_attr(w, m.attr);
                 },
                 [&](const AttrReply& m) { put_attr(w, m.attr); },
                 [&](const ReadReply& m) { w.blob32(m.data); },
                 [&](const WriteReply& m) { w.u64(m.count); },
                 [&](const ReaddirReply& m) {
                   w.u64(m.next_cursor);
                   w.u8(m.eof ? 1 : 0);
                   w.u32(static_cast<std::uint32_t>(m.entries.size()));
                   for (const auto& e : m.entries) {
                     w.str(e.name);
                     w.u8(static_cast<std::uint8_t>(e.kind));
                   }
                 },
                 [&](const ReadlinkReply& m) { w.str(m.target); },
                 [&](const ListAttachesReply& m) {
                   w.u32(static_cast<std::uint32_t>(m.names.size()));
                   for (const auto& n : m.names) w.str(n);
                 },
             },
             response.body);
  return std::move(w).finish();
}

Response decode_response(ByteSpan frame) {
  Response resp;
  Reader r = open_frame(frame, resp.xid, resp.opcode);
  const std::uint16_t status = r.u16();
  if (status > static_cast<std::uint16_t>(RpcStatus::BadMsg)) {
    throw Error(Errc::BadMessage, "unknown status");
  }
  resp.status = static_cast<RpcStatus>(status);
  if (resp.status != RpcStatus::Ok) {
    r.expect_end();
    return resp;
  }
  switch (static_cast<Opcode>(resp.opcode)) {
    case Opcode::Attach:
    case Opcode::Create:
    case Opcode::Mkdir:
    case Opcode::Symlink: resp.body = HandleReply{r.handle()}; break;
    case Opcode::Detach:
    case Opcode::Remove:
    case Opcode::Rename: resp.body = EmptyReply{}; break;
    case Opcode::Lookup: {
      LookupReply m;
      m.handle = r.handle();
      m.attr = get_attr(r);
      resp.body = m;
      break;
    }
    case Opcode::Getattr: resp.body = AttrReply{get_attr(r)}; break;
    case Opcode::Read: resp.body = ReadReply{r.blob32()}; break;
    case Opcode::Write: resp.body = WriteReply{r.u64()}; break;
    case Opcode::Readdir: {
      ReaddirReply m;
      m.next_cursor = r.u64();
      m.eof = r.boolean();
      const std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        DirEntry e;
        e.name = r.str();
        e.kind = get_kind(r);
        m.entries.push_back(std::move(e));
      }
      resp.body = std::move(m);
      break;
    }
    case Opcode::Readlink: resp.body = ReadlinkReply{r.str()}; break;
    case Opcode::ListAttaches: {
      ListAttachesReply m;
      const std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i) m.names.push_back(r.str());
      resp.body = std::move(m);
      break;
    }
    default: throw Error(Errc::BadMessage, "unknown opcode");
  }
  r.expect_end();
  return resp;
}

Response bad_message_response(ByteSpan frame) {
  Response resp;
  resp.status = RpcStatus::BadMsg;
  if (frame.size() >= 8) resp.xid = get_be32(frame.data() + 4);
  return resp;
}

std::optional<std::uint64_t> frame_size(ByteSpan buffered) {
  if (buffered.size() < 4) return std::nullopt;
  return std::uint64_t{get_be32(buffered.data())} + 4;
}

}  // namespace efs::wire
