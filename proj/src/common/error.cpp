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

#include "common/error.hpp"

namespace efs {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::PassphraseTooShort: return "passphrase too short";
    case Errc::CorruptHeader: return "corrupt header";
    case Errc::Io: return "i/o failure";
    case Errc::NameTooLong: return "name too long";
    case Errc::EmptyName: return "empty name";
    case Errc::InvalidName: return "invalid name";
    case Errc::NotAnEfsName: return "not an efs name";
    case Errc::ChecksumMismatch: return "checksum mismatch";
    case Errc::InvalidEncoding: return "invalid encoding";
    case Errc::BadKey: return "incorrect key";
    case Errc::Exists: return "already exists";
    case Errc::NotAnEfsDirectory: return "not an efs directory";
    case Errc::Access: return "permission denied";
    case Errc::NotFound: return "not found";
    case Errc::Stale: return "stale handle";
    case Errc::NotDir: return "not a directory";
    case Errc::IsDir: return "is a directory";
    case Errc::NotEmpty: return "directory not empty";
    case Errc::CrossAttach: return "cross-attach operation";
    case Errc::InvalidArgument: return "invalid argument";
    case Errc::BadMessage: return "malformed message";
  }
  return "unknown error";
}

}  // namespace efs
