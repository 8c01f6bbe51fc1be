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

#include <unistd.h>

#include <string>

#include "common/bytes.hpp"
#include "daemon/service.hpp"
#include "daemon/validator.hpp"
#include "support/oracle.hpp"

namespace efs::testing {

inline constexpr const char* kPassphrase = "correct horse battery staple";
inline constexpr std::size_t kFastMask = 64;
inline constexpr unsigned kFastKdf = 1000;

inline daemon::Config fast_config(std::size_t cache = 16) {
  daemon::Config c;
  c.cache_capacity = cache;
  c.mask_blocks = kFastMask;
  c.kdf_iterations = kFastKdf;
  return c;
}

inline std::filesystem::path make_efs_dir(const TempDir& tmp, const std::string& leaf,
                                          const char* pass = kPassphrase) {
  auto dir = tmp / leaf;
  daemon::create_efs_directory(dir, as_bytes(pass), kFastMask, kFastKdf);
  return dir;
}

inline daemon::Caller owner() { return daemon::Caller{::getuid()}; }
inline daemon::Caller stranger() { return daemon::Caller{::getuid() + 1}; }

}  // namespace efs::testing
