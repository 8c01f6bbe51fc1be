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

#include <string>

#include "daemon/service.hpp"

namespace efs::daemon {

inline constexpr const char* kDefaultEndpoint = "/tmp/efsd.sock";

/// EFS_ENDPOINT, falling back to kDefaultEndpoint.
std::string endpoint_from_env();

/// Applies EFS_CACHE_CAP and EFS_MASK_BLOCKS on top of `base`. Throws
/// Error(InvalidArgument) on values that are not plain non-negative integers.
Config config_from_env(Config base = {});

}  // namespace efs::daemon
