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

#include "daemon/service.hpp"

#include <dirent.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <functional>

#include "common/error.hpp"
#include "crypto/cipher.hpp"
#include "daemon/validator.hpp"
#include "names/name_codec.hpp"

namespace efs::daemon {

namespace fs = std::filesystem;

struct Service::Resolved {
  std::shared_ptr<AttachPoint> attach;  // null for the virtual root
  Handle handle{};
  std::string rel;
  fs::path full;
  struct stat st {};

  bool is_dir() const { return S_ISDIR(st.st_mode); }
  std::shared_mutex& lock() const {
    return attach->file_locks[std::hash<std::string>{}(rel) % AttachPoint::kLockStripes];
  }
};

namespace {

constexpr std::size_t kMaxAttachName = 255;

std::uint64_t to_ns(const timespec& ts) {
  return static_cast<std::uint64_t>(ts.tv_sec) * 1000000000ull +
         static_cast<std::uint64_t>(ts.tv_nsec);
}

wire::FileKind kind_of(mode_t mode) {
  if (S_ISREG(mode)) return wire::FileKind::Regular;
  if (S_ISDIR(mode)) return wire::FileKind::Directory;
  if (S_ISLNK(mode)) return wire::FileKind::Symlink;
  return wire::FileKind::Other;
}

Attributes base_attributes(const struct stat& st) {
  Attributes a;
  a.kind = kind_of(st.st_mode);
  a.mode = static_cast<std::uint32_t>(st.st_mode & 07777);
  a.size = static_cast<std::uint64_t>(st.st_size);
  a.atime_ns = to_ns(st.st_atim);
  a.mtime_ns = to_ns(st.st_mtim);
  a.ctime_ns = to_ns(st.st_ctim);
  return a;
}

// lstat; ENOENT maps to `missing`.
bool stat_path(const fs::path& p, struct stat& st) {
  if (::lstat(p.c_str(), &st) == 0) return true;
  if (errno == ENOENT || errno == ENOTDIR) return false;
  throw Error(Errc::Io, std::string("lstat: ") + std::strerror(errno));
}

std::string join(const std::string& rel, const std::string& component) {
  return rel.empty() ? component : rel + "/" + component;
}

std::string parent_of(const std::string& rel) {
  const auto slash = rel.rfind('/');
  return slash == std::string::npos ? std::string() : rel.substr(0, slash);
}

void check_owner(const AttachPoint& a, Caller caller) {
  if (a.owner != caller.uid) throw Error(Errc::Access);
}

std::string read_link_text(const fs::path& p) {
  std::string buf(8192, '\0');
  const ssize_t n = ::readlink(p.c_str(), buf.data(), buf.size());
  if (n < 0) throw Error(Errc::Io, std::string("readlink: ") + std::strerror(errno));
  buf.resize(static_cast<std::size_t>(n));
  return buf;
}

}  // namespace

Service::Service(Config config) : config_(config), cache_(config.cache_capacity) {
  if (config_.mask_blocks == 0) throw Error(Errc::InvalidArgument, "mask period must be >= 1");
  if (config_.readdir_page == 0) config_.readdir_page = 256;
}

Service::~Service() = default;

Handle Service::derive_handle(const AttachPoint& attach, const std::string& enc_rel_path) {
  const auto mac = crypto::hmac_sha256(attach.secret, as_bytes(enc_rel_path));
  Handle h{};
  put_be64(h.data(), attach.id);
  std::copy_n(mac.begin(), h.size() - 8, h.begin() + 8);
  return h;
}

Handle Service::register_path(AttachPoint& attach, const std::string& enc_rel_path) {
  Handle h = derive_handle(attach, enc_rel_path);
  std::lock_guard lock(attach.table_mu);
  attach.handles.insert_or_assign(h, enc_rel_path);
  return h;
}

void Service::forget(AttachPoint& attach, const Handle& handle) {
  {
    std::lock_guard lock(attach.table_mu);
    attach.handles.erase(handle);
  }
  cache_.erase(handle);
}

std::shared_ptr<AttachPoint> Service::find_attach(std::uint64_t id) const {
  std::shared_lock lock(registry_mu_);
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

Service::Resolved Service::resolve(const Handle& handle, Caller caller) const {
  Resolved r;
  r.handle = handle;
  if (handle == virtual_root()) {
    r.st.st_mode = S_IFDIR | 0755;
    return r;
  }
  r.attach = find_attach(get_be64(handle.data()));
  if (!r.attach) throw Error(Errc::Stale);
  {
    std::lock_guard lock(r.attach->table_mu);
    auto it = r.attach->handles.find(handle);
    if (it == r.attach->handles.end()) throw Error(Errc::Stale);
    r.rel = it->second;
  }
  check_owner(*r.attach, caller);
  r.full = r.rel.empty() ? r.attach->backing_dir : r.attach->backing_dir / r.rel;
  if (!stat_path(r.full, r.st)) throw Error(Errc::Stale);
  return r;
}

Service::Resolved Service::resolve_dir(const Handle& handle, Caller caller) const {
  Resolved r = resolve(handle, caller);
  if (!r.is_dir()) throw Error(Errc::NotDir);
  return r;
}

std::shared_ptr<OpenFile> Service::open_file(const Resolved& r) {
  return cache_.acquire(r.handle, r.full, r.st.st_dev, r.st.st_ino);
}

Attributes Service::attributes_of(const Resolved& r) {
  Attributes a = base_attributes(r.st);
  if (!r.attach) return a;
  if (S_ISREG(r.st.st_mode)) {
    std::shared_lock lock(r.lock());
    auto f = open_file(r);
    const auto hdr = crypto::read_header(f->file);
    a.size = hdr ? hdr->plaintext_length : 0;
  } else if (S_ISLNK(r.st.st_mode)) {
    try {
      a.size = names::open_link_target(read_link_text(r.full), *r.attach->keys).size();
    } catch (const Error&) {
      // Undecryptable target: report the stored size.
    }
  }
  return a;
}

// --- attach points ------------------------------------------------------------

Handle Service::attach(const fs::path& backing_dir, const std::string& attach_name,
                       ByteSpan passphrase, bool obscure, Caller caller) {
  if (attach_name.empty() || attach_name.size() > kMaxAttachName ||
      attach_name.find('/') != std::string::npos ||
      attach_name.find('\0') != std::string::npos || names::is_dot_entry(attach_name)) {
    throw Error(Errc::InvalidName, "bad attach name");
  }
  if (!backing_dir.is_absolute()) throw Error(Errc::InvalidArgument, "backing path not absolute");
  {
    std::shared_lock lock(registry_mu_);
    if (by_name_.count(attach_name) != 0) throw Error(Errc::Exists);
  }
  struct stat st {};
  if (::stat(backing_dir.c_str(), &st) != 0) throw Error(Errc::NotFound, backing_dir.string());
  if (!S_ISDIR(st.st_mode)) throw Error(Errc::NotDir, backing_dir.string());
  if (caller.uid != 0 && caller.uid != st.st_uid) throw Error(Errc::Access);

  crypto::SubKeyPair keys;
  try {
    keys = crypto::derive_subkeys(passphrase, config_.kdf_iterations);
  } catch (const Error& e) {
    if (e.code() == Errc::PassphraseTooShort) throw Error(Errc::BadKey, "passphrase too short");
    throw;
  }
  if (!check_validator(backing_dir, keys, config_.mask_blocks)) throw Error(Errc::BadKey);

  // The key is right: now pay for the full mask.
  auto attach = std::make_shared<AttachPoint>();
  attach->name = attach_name;
  attach->backing_dir = backing_dir.lexically_normal();
  attach->owner = caller.uid;
  attach->obscure = obscure;
  crypto::random_bytes(attach->secret);
  attach->keys = std::make_shared<const crypto::ContentKeys>(keys, config_.mask_blocks);

  std::unique_lock lock(registry_mu_);
  if (by_name_.count(attach_name) != 0) throw Error(Errc::Exists);
  attach->id = next_id_++;
  by_name_.emplace(attach_name, attach);
  by_id_.emplace(attach->id, attach);
  lock.unlock();
  return register_path(*attach, "");
}

void Service::detach(const std::string& attach_name, Caller caller) {
  std::shared_ptr<AttachPoint> attach;
  {
    std::unique_lock lock(registry_mu_);
    auto it = by_name_.find(attach_name);
    if (it == by_name_.end()) throw Error(Errc::NotFound);
    check_owner(*it->second, caller);
    attach = it->second;
    by_name_.erase(it);
    by_id_.erase(attach->id);
  }
  cache_.erase_attach(attach->id);
  std::lock_guard lock(attach->table_mu);
  attach->handles.clear();
  // Secret and keys are wiped when the last in-flight request lets go.
}

std::vector<std::string> Service::list_attaches(Caller caller) const {
  std::shared_lock lock(registry_mu_);
  std::vector<std::string> out;
  for (const auto& [name, a] : by_name_) {
    if (a->owner == caller.uid || !a->obscure) out.push_back(name);
  }
  return out;
}

// --- namespace operations -------------------------------------------------------

LookupResult Service::lookup(const Handle& dir, const std::string& name, Caller caller) {
  Resolved d = resolve_dir(dir, caller);
  if (!d.attach) {
    std::shared_ptr<AttachPoint> a;
    {
      std::shared_lock lock(registry_mu_);
      auto it = by_name_.find(name);
      if (it != by_name_.end()) a = it->second;
    }
    if (!a) throw Error(Errc::NotFound);
    if (a->owner != caller.uid) throw Error(a->obscure ? Errc::NotFound : Errc::Access);
    Handle root = register_path(*a, "");
    return {root, attributes_of(resolve(root, caller))};
  }
  if (name == ".") return {dir, attributes_of(d)};
  if (name == "..") {
    if (d.rel.empty()) return {virtual_root(), base_attributes(resolve(virtual_root(), caller).st)};
    Handle parent = register_path(*d.attach, parent_of(d.rel));
    return {parent, attributes_of(resolve(parent, caller))};
  }
  const std::string child = join(d.rel, names::seal_name(name, *d.attach->keys));
  struct stat st {};
  if (!stat_path(d.attach->backing_dir / child, st)) throw Error(Errc::NotFound);
  Handle h = register_path(*d.attach, child);
  return {h, attributes_of(resolve(h, caller))};
}

Attributes Service::getattr(const Handle& handle, Caller caller) {
  return attributes_of(resolve(handle, caller));
}

Bytes Service::read(const Handle& handle, std::uint64_t offset, std::uint64_t count,
                    Caller caller) {
  Resolved r = resolve(handle, caller);
  if (r.is_dir()) throw Error(Errc::IsDir);
  if (!S_ISREG(r.st.st_mode)) throw Error(Errc::InvalidArgument, "not a regular file");
  count = std::min<std::uint64_t>(count, wire::kMaxIoChunk);
  std::shared_lock lock(r.lock());
  auto f = open_file(r);
  return crypto::read_range(f->file, offset, count, *r.attach->keys);
}

std::uint64_t Service::write(const Handle& handle, std::uint64_t offset, ByteSpan data,
                             Caller caller) {
  Resolved r = resolve(handle, caller);
  if (r.is_dir()) throw Error(Errc::IsDir);
  if (!S_ISREG(r.st.st_mode)) throw Error(Errc::InvalidArgument, "not a regular file");
  std::unique_lock lock(r.lock());
  auto f = open_file(r);
  const std::uint16_t flags = config_.ascii_payload ? crypto::kFlagAsciiPayload : 0;
  return crypto::write_range(f->file, offset, data, *r.attach->keys, flags);
}

Handle Service::create(const Handle& dir, const std::string& name, std::uint32_t mode,
                       Caller caller) {
  Resolved d = resolve_dir(dir, caller);
  if (!d.attach) throw Error(Errc::Access, "virtual root is read-only");
  const std::string child = join(d.rel, names::seal_name(name, *d.attach->keys));
  {
    auto file = BackingFile::create(d.attach->backing_dir / child, (mode & 0777) | 0600);
    crypto::initialize_file(file, config_.ascii_payload ? crypto::kFlagAsciiPayload : 0);
  }
  return register_path(*d.attach, child);
}

Handle Service::mkdir(const Handle& dir, const std::string& name, std::uint32_t mode,
                      Caller caller) {
  Resolved d = resolve_dir(dir, caller);
  if (!d.attach) throw Error(Errc::Access, "virtual root is read-only");
  const std::string child = join(d.rel, names::seal_name(name, *d.attach->keys));
  if (::mkdir((d.attach->backing_dir / child).c_str(), (mode & 0777) | 0700) != 0) {
    if (errno == EEXIST) throw Error(Errc::Exists);
    throw Error(Errc::Io, std::string("mkdir: ") + std::strerror(errno));
  }
  return register_path(*d.attach, child);
}

void Service::remove_entry(const Handle& dir, const std::string& name, Caller caller) {
  Resolved d = resolve_dir(dir, caller);
  if (!d.attach) throw Error(Errc::Access, "virtual root is read-only");
  if (names::is_dot_entry(name)) throw Error(Errc::InvalidName);
  const std::string child = join(d.rel, names::seal_name(name, *d.attach->keys));
  const fs::path full = d.attach->backing_dir / child;
  struct stat st {};
  if (!stat_path(full, st)) throw Error(Errc::NotFound);
  const int rc = S_ISDIR(st.st_mode) ? ::rmdir(full.c_str()) : ::unlink(full.c_str());
  if (rc != 0) {
    if (errno == ENOTEMPTY || errno == EEXIST) throw Error(Errc::NotEmpty);
    if (errno == ENOENT) throw Error(Errc::NotFound);
    throw Error(Errc::Io, std::string("remove: ") + std::strerror(errno));
  }
  forget(*d.attach, derive_handle(*d.attach, child));
}

void Service::rename_entry(const Handle& src_dir, const std::string& src_name,
                           const Handle& dst_dir, const std::string& dst_name, Caller caller) {
  Resolved s = resolve_dir(src_dir, caller);
  Resolved d = resolve_dir(dst_dir, caller);
  if (!s.attach || !d.attach) throw Error(Errc::Access, "virtual root is read-only");
  if (s.attach != d.attach) throw Error(Errc::CrossAttach);
  if (names::is_dot_entry(src_name) || names::is_dot_entry(dst_name)) {
    throw Error(Errc::InvalidName);
  }
  const auto& keys = *s.attach->keys;
  const std::string from = join(s.rel, names::seal_name(src_name, keys));
  const std::string to = join(d.rel, names::seal_name(dst_name, keys));
  const fs::path from_full = s.attach->backing_dir / from;
  struct stat st {};
  if (!stat_path(from_full, st)) throw Error(Errc::NotFound);
  if (::rename(from_full.c_str(), (s.attach->backing_dir / to).c_str()) != 0) {
    switch (errno) {
      case ENOENT: throw Error(Errc::NotFound);
      case ENOTEMPTY:
      case EEXIST: throw Error(Errc::NotEmpty);
      case EISDIR: throw Error(Errc::IsDir);
      case ENOTDIR: throw Error(Errc::NotDir);
      case EINVAL: throw Error(Errc::InvalidArgument, "cannot move a directory into itself");
      default: throw Error(Errc::Io, std::string("rename: ") + std::strerror(errno));
    }
  }
  forget(*s.attach, derive_handle(*s.attach, from));
  forget(*s.attach, derive_handle(*s.attach, to));
}

ReaddirPage Service::readdir(const Handle& dir, std::uint64_t cursor, std::uint32_t max_entries,
                             Caller caller) {
  Resolved d = resolve_dir(dir, caller);
  const std::uint32_t limit = max_entries == 0 ? config_.readdir_page : max_entries;

  // Raw listing: dot entries first, then backing names in a stable order.
  std::vector<std::pair<std::string, wire::FileKind>> raw = {
      {".", wire::FileKind::Directory}, {"..", wire::FileKind::Directory}};
  if (!d.attach) {
    for (auto& n : list_attaches(caller)) raw.emplace_back(std::move(n), wire::FileKind::Directory);
  } else {
    DIR* dp = ::opendir(d.full.c_str());
    if (dp == nullptr) throw Error(Errc::Io, std::string("opendir: ") + std::strerror(errno));
    std::vector<std::pair<std::string, wire::FileKind>> found;
    while (dirent* e = ::readdir(dp)) {
      std::string n = e->d_name;
      if (names::is_dot_entry(n) || n == kValidatorName) continue;
      wire::FileKind kind = wire::FileKind::Other;
      switch (e->d_type) {
        case DT_REG: kind = wire::FileKind::Regular; break;
        case DT_DIR: kind = wire::FileKind::Directory; break;
        case DT_LNK: kind = wire::FileKind::Symlink; break;
        default: {
          struct stat st {};
          if (stat_path(d.full / n, st)) kind = kind_of(st.st_mode);
        }
      }
      found.emplace_back(std::move(n), kind);
    }
    ::closedir(dp);
    std::sort(found.begin(), found.end());
    raw.insert(raw.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  }

  ReaddirPage page;
  std::uint64_t i = cursor;
  for (; i < raw.size() && page.entries.size() < limit; ++i) {
    const auto& [name, kind] = raw[i];
    if (!d.attach || names::is_dot_entry(name)) {
      page.entries.push_back({name, kind});
      continue;
    }
    try {
      page.entries.push_back({names::open_name(name, *d.attach->keys), kind});
    } catch (const Error& e) {
      // Foreign or undecryptable entries are not ours to show.
      if (e.code() != Errc::NotAnEfsName && e.code() != Errc::ChecksumMismatch) throw;
    }
  }
  page.next_cursor = i;
  page.eof = i >= raw.size();
  return page;
}

Handle Service::symlink(const Handle& dir, const std::string& name, const std::string& target,
                        Caller caller) {
  Resolved d = resolve_dir(dir, caller);
  if (!d.attach) throw Error(Errc::Access, "virtual root is read-only");
  const auto& keys = *d.attach->keys;
  const std::string child = join(d.rel, names::seal_name(name, keys));
  const std::string sealed = names::seal_link_target(target, keys);
  if (::symlink(sealed.c_str(), (d.attach->backing_dir / child).c_str()) != 0) {
    if (errno == EEXIST) throw Error(Errc::Exists);
    throw Error(Errc::Io, std::string("symlink: ") + std::strerror(errno));
  }
  return register_path(*d.attach, child);
}

std::string Service::readlink(const Handle& handle, Caller caller) {
  Resolved r = resolve(handle, caller);
  if (!S_ISLNK(r.st.st_mode)) throw Error(Errc::InvalidArgument, "not a symbolic link");
  try {
    return names::open_link_target(read_link_text(r.full), *r.attach->keys);
  } catch (const Error& e) {
    if (e.code() == Errc::ChecksumMismatch || e.code() == Errc::NotAnEfsName) {
      throw Error(Errc::Io, "undecryptable link target");
    }
    throw;
  }
}

}  // namespace efs::daemon
