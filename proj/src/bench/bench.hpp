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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace efs::bench {

/// Sizes of the historical measurement set, plus the empty and one-byte files.
inline constexpr std::uint64_t kReferenceSizes[] = {909, 3686, 9728, 10956, 15974};

/// Reference expansion reported for the original prototype (encrypted/original).
/// No standard encoding of this scheme reproduces it; kept for comparison only.
inline constexpr double kReferenceExpansion = 2.5;

struct SpaceRow {
  std::uint64_t size_in = 0;
  std::uint64_t size_out = 0;
  double ratio = 0.0;  // size_out / size_in; infinite for empty input
};

struct TimeRow {
  std::uint64_t size_in = 0;
  std::uint64_t median_ns = 0;
  double ns_per_byte = 0.0;
  std::uint64_t baseline_ns = 0;  // keystream XOR + plain write, no block cipher
};

/// Closed-form backing size for n cleartext bytes.
std::uint64_t expected_backing_size(std::uint64_t n, bool ascii);

/// Writes one synthetic file per size through the daemon service (in process)
/// and measures its backing file. `workdir` must exist; scratch space is
/// created beneath it and removed afterwards.
std::vector<SpaceRow> run_space_bench(std::span<const std::uint64_t> sizes, bool ascii,
                                      const std::filesystem::path& workdir);

/// Median wall time of the encrypt-and-write path per size. Sizes are visited
/// round-robin so drift hits all of them alike; warm-up rounds are discarded.
std::vector<TimeRow> run_time_bench(std::span<const std::uint64_t> sizes, unsigned repetitions,
                                    const std::filesystem::path& workdir);

std::string to_csv(const std::vector<SpaceRow>& rows);
std::string to_csv(const std::vector<TimeRow>& rows);
std::string to_json(const std::vector<SpaceRow>& rows);
std::string to_json(const std::vector<TimeRow>& rows);

}  // namespace efs::bench
