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

#include "efs/efs.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <string>

#include "bench/bench.hpp"
#include "common/error.hpp"
#include "daemon/client.hpp"
#include "daemon/dispatch.hpp"
#include "daemon/server.hpp"
#include "daemon/validator.hpp"

struct efs_daemon {
  std::unique_ptr<efs::daemon::Service> service;
  std::unique_ptr<efs::daemon::Server> server;
};

struct efs_client {
  efs::daemon::Client client;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& detail) {
  g_last_error = detail;
  return status;
}

int status_of(efs::Errc code) {
  switch (code) {
    case efs::Errc::PassphraseTooShort: return EFS_E_SHORT_KEY;
    case efs::Errc::InvalidArgument: return EFS_E_INVALID;
    default: return static_cast<int>(efs::daemon::status_for(code));
  }
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return EFS_OK;
  } catch (const efs::daemon::RpcError& e) {
    return fail(static_cast<int>(e.status()), e.what());
  } catch (const efs::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(EFS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(EFS_E_INTERNAL, "unknown failure");
  }
}

efs::wire::Handle to_handle(const efs_handle* h) {
  efs::wire::Handle out{};
  std::memcpy(out.data(), h->bytes, out.size());
  return out;
}

void from_handle(const efs::wire::Handle& h, efs_handle* out) {
  if (out != nullptr) std::memcpy(out->bytes, h.data(), h.size());
}

void from_attr(const efs::wire::Attributes& a, efs_attr* out) {
  if (out == nullptr) return;
  out->kind = static_cast<int>(a.kind);
  out->mode = a.mode;
  out->size = a.size;
  out->atime_ns = a.atime_ns;
  out->mtime_ns = a.mtime_ns;
  out->ctime_ns = a.ctime_ns;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

efs::ByteSpan pass_bytes(const char* p, size_t n) {
  return {reinterpret_cast<const std::uint8_t*>(p), n};
}

#define EFS_REQUIRE(cond)                                             \
  do {                                                                \
    if (!(cond)) return fail(EFS_E_INVALID, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* efs_status_string(int status) {
  switch (status) {
    case EFS_E_INVALID: return "invalid argument";
    case EFS_E_SHORT_KEY: return "passphrase must be at least 16 characters";
    case EFS_E_CONNECT: return "cannot reach daemon";
    case EFS_E_INTERNAL: return "internal error";
    default:
      if (status >= 0 && status <= EFS_BADMSG) {
        return efs::wire::status_name(static_cast<efs::wire::RpcStatus>(status));
      }
      return "unknown status";
  }
}

const char* efs_last_error(void) { return g_last_error.c_str(); }

void efs_free(void* p) { std::free(p); }

int efs_emkdir(const char* dir, const char* passphrase, size_t passphrase_len, size_t mask_blocks) {
  EFS_REQUIRE(dir != nullptr && passphrase != nullptr);
  return guarded([&] {
    efs::daemon::create_efs_directory(dir, pass_bytes(passphrase, passphrase_len),
                                      mask_blocks == 0 ? efs::crypto::kDefaultMaskBlocks
                                                       : mask_blocks);
  });
}

int efs_daemon_create(const char* endpoint, size_t cache_capacity, size_t mask_blocks,
                      efs_daemon** out) {
  EFS_REQUIRE(endpoint != nullptr && out != nullptr);
  return guarded([&] {
    efs::daemon::Config cfg;
    cfg.cache_capacity = cache_capacity;
    if (mask_blocks != 0) cfg.mask_blocks = mask_blocks;
    auto d = std::make_unique<efs_daemon>();
    d->service = std::make_unique<efs::daemon::Service>(cfg);
    d->server = std::make_unique<efs::daemon::Server>(*d->service, endpoint);
    *out = d.release();
  });
}

int efs_daemon_start(efs_daemon* d) {
  EFS_REQUIRE(d != nullptr);
  return guarded([&] { d->server->start(); });
}

int efs_daemon_stop(efs_daemon* d) {
  EFS_REQUIRE(d != nullptr);
  return guarded([&] { d->server->stop(); });
}

void efs_daemon_destroy(efs_daemon* d) { delete d; }

int efs_client_connect(const char* endpoint, efs_client** out) {
  EFS_REQUIRE(endpoint != nullptr && out != nullptr);
  try {
    *out = new efs_client{efs::daemon::Client(endpoint)};
    return EFS_OK;
  } catch (const std::exception& e) {
    return fail(EFS_E_CONNECT, e.what());
  }
}

void efs_client_close(efs_client* c) { delete c; }

void efs_root_handle(efs_handle* out) {
  from_handle(efs::daemon::Service::virtual_root(), out);
}

int efs_attach(efs_client* c, const char* backing_dir, const char* attach_name,
               const char* passphrase, size_t passphrase_len, int obscure, efs_handle* root_out) {
  EFS_REQUIRE(c && backing_dir && attach_name && passphrase);
  return guarded([&] {
    from_handle(c->client.attach(backing_dir, attach_name, pass_bytes(passphrase, passphrase_len),
                                 obscure != 0),
                root_out);
  });
}

int efs_detach(efs_client* c, const char* attach_name) {
  EFS_REQUIRE(c && attach_name);
  return guarded([&] { c->client.detach(attach_name); });
}

int efs_list_attaches(efs_client* c, efs_name_cb cb, void* user) {
  EFS_REQUIRE(c && cb);
  return guarded([&] {
    for (const auto& n : c->client.list_attaches()) cb(n.c_str(), EFS_KIND_DIRECTORY, user);
  });
}

int efs_lookup(efs_client* c, const efs_handle* dir, const char* name, efs_handle* out,
               efs_attr* attr_out) {
  EFS_REQUIRE(c && dir && name);
  return guarded([&] {
    auto r = c->client.lookup(to_handle(dir), name);
    from_handle(r.handle, out);
    from_attr(r.attr, attr_out);
  });
}

int efs_getattr(efs_client* c, const efs_handle* h, efs_attr* out) {
  EFS_REQUIRE(c && h && out);
  return guarded([&] { from_attr(c->client.getattr(to_handle(h)), out); });
}

int efs_read(efs_client* c, const efs_handle* h, uint64_t offset, void* buf, size_t count,
             size_t* nread) {
  EFS_REQUIRE(c && h && (buf || count == 0) && nread);
  return guarded([&] {
    std::size_t done = 0;
    while (done < count) {
      const auto want = std::min<std::size_t>(count - done, efs::wire::kMaxIoChunk);
      auto chunk = c->client.read(to_handle(h), offset + done, want);
      std::memcpy(static_cast<char*>(buf) + done, chunk.data(), chunk.size());
      done += chunk.size();
      if (chunk.size() < want) break;
    }
    *nread = done;
  });
}

int efs_write(efs_client* c, const efs_handle* h, uint64_t offset, const void* data, size_t len,
              size_t* nwritten) {
  EFS_REQUIRE(c && h && (data || len == 0));
  return guarded([&] {
    c->client.write_all(to_handle(h), offset, {static_cast<const std::uint8_t*>(data), len});
    if (nwritten) *nwritten = len;
  });
}

int efs_create(efs_client* c, const efs_handle* dir, const char* name, uint32_t mode,
               efs_handle* out) {
  EFS_REQUIRE(c && dir && name);
  return guarded([&] { from_handle(c->client.create(to_handle(dir), name, mode), out); });
}

int efs_mkdir(efs_client* c, const efs_handle* dir, const char* name, uint32_t mode,
              efs_handle* out) {
  EFS_REQUIRE(c && dir && name);
  return guarded([&] { from_handle(c->client.mkdir(to_handle(dir), name, mode), out); });
}

int efs_remove(efs_client* c, const efs_handle* dir, const char* name) {
  EFS_REQUIRE(c && dir && name);
  return guarded([&] { c->client.remove(to_handle(dir), name); });
}

int efs_rename(efs_client* c, const efs_handle* src_dir, const char* src_name,
               const efs_handle* dst_dir, const char* dst_name) {
  EFS_REQUIRE(c && src_dir && src_name && dst_dir && dst_name);
  return guarded([&] {
    c->client.rename(to_handle(src_dir), src_name, to_handle(dst_dir), dst_name);
  });
}

int efs_readdir(efs_client* c, const efs_handle* dir, efs_name_cb cb, void* user) {
  EFS_REQUIRE(c && dir && cb);
  return guarded([&] {
    for (const auto& e : c->client.readdir(to_handle(dir))) {
      cb(e.name.c_str(), static_cast<int>(e.kind), user);
    }
  });
}

int efs_symlink(efs_client* c, const efs_handle* dir, const char* name, const char* target,
                efs_handle* out) {
  EFS_REQUIRE(c && dir && name && target);
  return guarded([&] { from_handle(c->client.symlink(to_handle(dir), name, target), out); });
}

int efs_readlink(efs_client* c, const efs_handle* h, char* buf, size_t cap, size_t* len) {
  EFS_REQUIRE(c && h && (buf || cap == 0));
  return guarded([&] {
    const std::string t = c->client.readlink(to_handle(h));
    if (len) *len = t.size();
    if (cap > 0) {
      const std::size_t n = std::min(cap - 1, t.size());
      std::memcpy(buf, t.data(), n);
      buf[n] = '\0';
    }
  });
}

int efs_bench_space(const uint64_t* sizes, size_t count, int ascii, int json, const char* workdir,
                    char** out) {
  EFS_REQUIRE((sizes || count == 0) && out);
  return guarded([&] {
    const auto dir = workdir ? std::filesystem::path(workdir) : std::filesystem::temp_directory_path();
    auto rows = efs::bench::run_space_bench({sizes, count}, ascii != 0, dir);
    *out = dup_string(json ? efs::bench::to_json(rows) : efs::bench::to_csv(rows));
  });
}

int efs_bench_time(const uint64_t* sizes, size_t count, unsigned repetitions, int json,
                   const char* workdir, char** out) {
  EFS_REQUIRE((sizes || count == 0) && out && repetitions > 0);
  return guarded([&] {
    const auto dir = workdir ? std::filesystem::path(workdir) : std::filesystem::temp_directory_path();
    auto rows = efs::bench::run_time_bench({sizes, count}, repetitions, dir);
    *out = dup_string(json ? efs::bench::to_json(rows) : efs::bench::to_csv(rows));
  });
}

}  // extern "C"
