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

#include "daemon/validator.hpp"

#include <cerrno>
#include <system_error>

#include "common/error.hpp"
#include "crypto/backing_file.hpp"

namespace efs::daemon {

namespace fs = std::filesystem;

void write_validator(const fs::path& dir, const crypto::ContentKeys& keys) {
  auto file = BackingFile::create(dir / kValidatorName, 0600);
  crypto::initialize_file(file);
  crypto::write_range(file, 0, as_bytes(kValidatorMagic), keys);
}

void create_efs_directory(const fs::path& dir, ByteSpan passphrase, std::size_t mask_blocks,
                          unsigned kdf_iterations) {
  // Validate the key material before touching the filesystem.
  crypto::ContentKeys keys(crypto::derive_subkeys(passphrase, kdf_iterations), mask_blocks);

  std::error_code ec;
  bool created = false;
  if (fs::exists(fs::symlink_status(dir, ec))) {
    if (!fs::is_directory(fs::symlink_status(dir, ec))) throw Error(Errc::NotDir, dir.string());
    if (!fs::is_empty(dir, ec) || ec) throw Error(Errc::NotEmpty, dir.string());
  } else {
    if (!fs::create_directory(dir, ec) || ec) {
      throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
    }
    fs::permissions(dir, fs::perms::owner_all, ec);
    created = true;
  }
  try {
    write_validator(dir, keys);
  } catch (...) {
    fs::remove(dir / kValidatorName, ec);
    if (created) fs::remove(dir, ec);
    throw;
  }
}

bool check_validator(const fs::path& dir, const crypto::SubKeyPair& keys,
                     std::size_t mask_blocks) {
  BackingFile file;
  try {
    file = BackingFile::open(dir / kValidatorName);
  } catch (const Error&) {
    throw Error(Errc::NotAnEfsDirectory, dir.string());
  }
  const std::size_t needed = (kValidatorMagic.size() + kBlockSize - 1) / kBlockSize;
  crypto::ContentKeys probe(keys, std::min(mask_blocks, needed));
  Bytes plain;
  try {
    plain = crypto::read_range(file, 0, kValidatorMagic.size(), probe);
  } catch (const Error& e) {
    if (e.code() == Errc::CorruptHeader) throw Error(Errc::NotAnEfsDirectory, "damaged validator");
    throw;
  }
  const ByteSpan magic = as_bytes(kValidatorMagic);
  const bool ok = plain.size() == magic.size() && std::equal(plain.begin(), plain.end(), magic.begin());
  secure_zero(plain.data(), plain.size());
  return ok;
}

}  // namespace efs::daemon
