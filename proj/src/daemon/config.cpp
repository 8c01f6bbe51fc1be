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

#include "daemon/config.hpp"

#include <charconv>
#include <cstdlib>

#include "common/error.hpp"

namespace efs::daemon {

namespace {

std::size_t parse_count(const char* name, const char* text) {
  std::size_t v = 0;
  const char* end = text + std::char_traits<char>::length(text);
  auto [ptr, ec] = std::from_chars(text, end, v);
  if (ec != std::errc() || ptr != end || ptr == text) {
    throw Error(Errc::InvalidArgument, std::string(name) + " must be a non-negative integer");
  }
  return v;
}

}  // namespace

std::string endpoint_from_env() {
  const char* v = std::getenv("EFS_ENDPOINT");
  return (v != nullptr && *v != '\0') ? v : kDefaultEndpoint;
}

Config config_from_env(Config base) {
  if (const char* v = std::getenv("EFS_CACHE_CAP")) base.cache_capacity = parse_count("EFS_CACHE_CAP", v);
  if (const char* v = std::getenv("EFS_MASK_BLOCKS")) {
    base.mask_blocks = parse_count("EFS_MASK_BLOCKS", v);
    if (base.mask_blocks == 0) throw Error(Errc::InvalidArgument, "EFS_MASK_BLOCKS must be >= 1");
  }
  return base;
}

}  // namespace efs::daemon
