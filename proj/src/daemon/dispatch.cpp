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

#include "daemon/dispatch.hpp"

#include <new>

#include "common/error.hpp"

namespace efs::daemon {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

wire::RpcStatus status_for(Errc code) noexcept {
  using S = wire::RpcStatus;
  switch (code) {
    case Errc::NotFound: return S::NoEnt;
    case Errc::Access: return S::Acces;
    case Errc::BadKey:
    case Errc::PassphraseTooShort: return S::BadKey;
    case Errc::Stale: return S::Stale;
    case Errc::Exists: return S::Exist;
    case Errc::NotDir:
    case Errc::NotAnEfsDirectory: return S::NotDir;
    case Errc::IsDir: return S::IsDir;
    case Errc::NameTooLong: return S::NameTooLong;
    case Errc::NotEmpty: return S::NotEmpty;
    case Errc::CrossAttach: return S::CrossAttach;
    case Errc::BadMessage:
    case Errc::InvalidArgument:
    case Errc::InvalidName:
    case Errc::EmptyName: return S::BadMsg;
    case Errc::Io:
    case Errc::CorruptHeader:
    case Errc::NotAnEfsName:
    case Errc::ChecksumMismatch:
    case Errc::InvalidEncoding: return S::Io;
  }
  return S::Io;
}

wire::Response dispatch(Service& svc, wire::Request& request, Caller caller) {
  wire::Response resp;
  resp.xid = request.xid;
  resp.opcode = static_cast<std::uint16_t>(request.opcode());
  try {
    resp.body = std::visit(
        Overloaded{
            [&](wire::AttachRequest& m) -> wire::ResponseBody {
              struct Wipe {
                Bytes& b;
                ~Wipe() { secure_zero(b.data(), b.size()); }
              } wipe{m.passphrase};
              return wire::HandleReply{
                  svc.attach(m.backing_dir, m.attach_name, m.passphrase, m.obscure, caller)};
            },
            [&](wire::DetachRequest& m) -> wire::ResponseBody {
              svc.detach(m.attach_name, caller);
              return wire::EmptyReply{};
            },
            [&](wire::LookupRequest& m) -> wire::ResponseBody {
              auto r = svc.lookup(m.dir, m.name, caller);
              return wire::LookupReply{r.handle, r.attr};
            },
            [&](wire::GetattrRequest& m) -> wire::ResponseBody {
              return wire::AttrReply{svc.getattr(m.handle, caller)};
            },
            [&](wire::ReadRequest& m) -> wire::ResponseBody {
              return wire::ReadReply{svc.read(m.handle, m.offset, m.count, caller)};
            },
            [&](wire::WriteRequest& m) -> wire::ResponseBody {
              return wire::WriteReply{svc.write(m.handle, m.offset, m.data, caller)};
            },
            [&](wire::CreateRequest& m) -> wire::ResponseBody {
              return wire::HandleReply{svc.create(m.dir, m.name, m.mode, caller)};
            },
            [&](wire::MkdirRequest& m) -> wire::ResponseBody {
              return wire::HandleReply{svc.mkdir(m.dir, m.name, m.mode, caller)};
            },
            [&](wire::RemoveRequest& m) -> wire::ResponseBody {
              svc.remove_entry(m.dir, m.name, caller);
              return wire::EmptyReply{};
            },
            [&](wire::RenameRequest& m) -> wire::ResponseBody {
              svc.rename_entry(m.src_dir, m.src_name, m.dst_dir, m.dst_name, caller);
              return wire::EmptyReply{};
            },
            [&](wire::ReaddirRequest& m) -> wire::ResponseBody {
              auto page = svc.readdir(m.dir, m.cursor, m.max_entries, caller);
              return wire::ReaddirReply{std::move(page.entries), page.next_cursor, page.eof};
            },
            [&](wire::SymlinkRequest& m) -> wire::ResponseBody {
              return wire::HandleReply{svc.symlink(m.dir, m.name, m.target, caller)};
            },
            [&](wire::ReadlinkRequest& m) -> wire::ResponseBody {
              return wire::ReadlinkReply{svc.readlink(m.handle, caller)};
            },
            [&](wire::ListAttachesRequest&) -> wire::ResponseBody {
              return wire::ListAttachesReply{svc.list_attaches(caller)};
            },
        },
        request.body);
  } catch (const Error& e) {
    resp.status = status_for(e.code());
    resp.body = wire::EmptyReply{};
  } catch (const std::bad_alloc&) {
    resp.status = wire::RpcStatus::Io;
    resp.body = wire::EmptyReply{};
  } catch (const std::filesystem::filesystem_error&) {
    resp.status = wire::RpcStatus::Io;
    resp.body = wire::EmptyReply{};
  }
  return resp;
}

Bytes handle_frame(Service& service, ByteSpan frame, Caller caller) {
  wire::Request request;
  try {
    request = wire::decode_request(frame);
  } catch (const Error&) {
    return wire::encode_response(wire::bad_message_response(frame));
  }
  return wire::encode_response(dispatch(service, request, caller));
}

}  // namespace efs::daemon
