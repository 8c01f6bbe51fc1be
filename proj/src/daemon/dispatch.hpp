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

#include "common/error.hpp"
#include "daemon/service.hpp"
#include "wire/protocol.hpp"

namespace efs::daemon {

wire::RpcStatus status_for(Errc code) noexcept;

/// Runs one decoded request against the service. Never throws for
/// request-level failures; they become a status code.
wire::Response dispatch(Service& service, wire::Request& request, Caller caller);

/// Frame in, frame out. Malformed input yields a BADMSG response.
Bytes handle_frame(Service& service, ByteSpan frame, Caller caller);

}  // namespace efs::daemon
