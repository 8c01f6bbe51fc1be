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

/* C interface to the efsgate encrypted file gateway.
 *
 * Objects are opaque and owned by the caller: every *_create / *_connect has
 * a matching *_destroy / *_close. Functions return an efs_status; on failure
 * efs_last_error() holds a human-readable detail for the calling thread.
 * Passphrases are passed as (pointer, length) and never retained. */
#ifndef EFS_EFS_H
#define EFS_EFS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define EFS_API __attribute__((visibility("default")))
#else
#define EFS_API
#endif

/* 0..12 are the daemon's wire status codes; larger values are local. */
typedef enum efs_status {
  EFS_OK = 0,
  EFS_NOENT = 1,
  EFS_ACCES = 2,
  EFS_BADKEY = 3,
  EFS_STALE = 4,
  EFS_IO = 5,
  EFS_EXIST = 6,
  EFS_NOTDIR = 7,
  EFS_ISDIR = 8,
  EFS_NAMETOOLONG = 9,
  EFS_NOTEMPTY = 10,
  EFS_CROSSATTACH = 11,
  EFS_BADMSG = 12,
  EFS_E_INVALID = 100,     /* bad argument to this library */
  EFS_E_SHORT_KEY = 101,   /* passphrase under 16 bytes */
  EFS_E_CONNECT = 102,     /* daemon endpoint unreachable */
  EFS_E_INTERNAL = 103
} efs_status;

typedef struct efs_handle {
  uint8_t bytes[32];
} efs_handle;

typedef enum efs_kind {
  EFS_KIND_OTHER = 0,
  EFS_KIND_REGULAR = 1,
  EFS_KIND_DIRECTORY = 2,
  EFS_KIND_SYMLINK = 3
} efs_kind;

typedef struct efs_attr {
  int kind; /* efs_kind */
  uint32_t mode;
  uint64_t size; /* cleartext bytes for regular files */
  uint64_t atime_ns;
  uint64_t mtime_ns;
  uint64_t ctime_ns;
} efs_attr;

typedef struct efs_daemon efs_daemon;
typedef struct efs_client efs_client;

typedef void (*efs_name_cb)(const char* name, int kind, void* user);

EFS_API const char* efs_status_string(int status);
EFS_API const char* efs_last_error(void);
EFS_API void efs_free(void* p);

/* Creates an encrypted directory (absent or empty) keyed by the passphrase.
 * mask_blocks = 0 selects the default mask period. */
EFS_API int efs_emkdir(const char* dir, const char* passphrase, size_t passphrase_len,
                       size_t mask_blocks);

/* Daemon serving the wire protocol on a Unix-domain socket at `endpoint`.
 * cache_capacity is taken literally (0 disables the descriptor cache);
 * mask_blocks = 0 selects the default period. */
EFS_API int efs_daemon_create(const char* endpoint, size_t cache_capacity, size_t mask_blocks,
                              efs_daemon** out);
EFS_API int efs_daemon_start(efs_daemon* d);
EFS_API int efs_daemon_stop(efs_daemon* d);
EFS_API void efs_daemon_destroy(efs_daemon* d);

/* Client. */
EFS_API int efs_client_connect(const char* endpoint, efs_client** out);
EFS_API void efs_client_close(efs_client* c);
EFS_API void efs_root_handle(efs_handle* out);

EFS_API int efs_attach(efs_client* c, const char* backing_dir, const char* attach_name,
                       const char* passphrase, size_t passphrase_len, int obscure,
                       efs_handle* root_out);
EFS_API int efs_detach(efs_client* c, const char* attach_name);
EFS_API int efs_list_attaches(efs_client* c, efs_name_cb cb, void* user);

EFS_API int efs_lookup(efs_client* c, const efs_handle* dir, const char* name, efs_handle* out,
                       efs_attr* attr_out);
EFS_API int efs_getattr(efs_client* c, const efs_handle* h, efs_attr* out);
EFS_API int efs_read(efs_client* c, const efs_handle* h, uint64_t offset, void* buf, size_t count,
                     size_t* nread);
EFS_API int efs_write(efs_client* c, const efs_handle* h, uint64_t offset, const void* data,
                      size_t len, size_t* nwritten);
EFS_API int efs_create(efs_client* c, const efs_handle* dir, const char* name, uint32_t mode,
                       efs_handle* out);
EFS_API int efs_mkdir(efs_client* c, const efs_handle* dir, const char* name, uint32_t mode,
                      efs_handle* out);
EFS_API int efs_remove(efs_client* c, const efs_handle* dir, const char* name);
EFS_API int efs_rename(efs_client* c, const efs_handle* src_dir, const char* src_name,
                       const efs_handle* dst_dir, const char* dst_name);
EFS_API int efs_readdir(efs_client* c, const efs_handle* dir, efs_name_cb cb, void* user);
EFS_API int efs_symlink(efs_client* c, const efs_handle* dir, const char* name,
                        const char* target, efs_handle* out);
/* Writes a NUL-terminated target into buf; *len gets the full length. */
EFS_API int efs_readlink(efs_client* c, const efs_handle* h, char* buf, size_t cap, size_t* len);

/* Benchmarks. *out receives a malloc'd NUL-terminated CSV (or JSON when
 * json != 0) to be released with efs_free. workdir NULL means $TMPDIR. */
EFS_API int efs_bench_space(const uint64_t* sizes, size_t count, int ascii, int json,
                            const char* workdir, char** out);
EFS_API int efs_bench_time(const uint64_t* sizes, size_t count, unsigned repetitions, int json,
                           const char* workdir, char** out);

#ifdef __cplusplus
}
#endif

#endif /* EFS_EFS_H */
