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

#include "bench/bench.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "common/encoding.hpp"
#include "common/error.hpp"
#include "crypto/cipher.hpp"
#include "crypto/content.hpp"
#include "daemon/service.hpp"
#include "daemon/validator.hpp"

namespace efs::bench {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kBenchPassphrase = "benchmark passphrase, not secret";
constexpr unsigned kWarmupRounds = 3;

class ScratchDir {
 public:
  explicit ScratchDir(const fs::path& parent) {
    std::string tmpl = (parent / "efs-bench-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw Error(Errc::Io, "mkdtemp failed");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// An attached encrypted directory backed by scratch space.
struct Stack {
  Stack(const fs::path& root, bool ascii) : service(make_config(ascii)) {
    backing = root / "backing";
    daemon::create_efs_directory(backing, as_bytes(kBenchPassphrase));
    caller.uid = ::getuid();
    dir = service.attach(backing, "bench", as_bytes(kBenchPassphrase), false, caller);
  }

  static daemon::Config make_config(bool ascii) {
    daemon::Config c;
    c.ascii_payload = ascii;
    return c;
  }

  // The single non-validator entry of the backing directory.
  fs::path only_file() const {
    for (const auto& e : fs::directory_iterator(backing)) {
      if (e.path().filename() != daemon::kValidatorName) return e.path();
    }
    throw Error(Errc::NotFound, "bench file missing");
  }

  daemon::Service service;
  fs::path backing;
  daemon::Caller caller;
  wire::Handle dir{};
};

Bytes synthetic(std::uint64_t n, std::mt19937_64& rng) {
  Bytes data(n);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  return data;
}

std::uint64_t median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0 : v[v.size() / 2];
}

std::string ratio_text(double r) {
  if (!std::isfinite(r)) return "inf";
  std::ostringstream os;
  os.precision(6);
  os << r;
  return os.str();
}

}  // namespace

std::uint64_t expected_backing_size(std::uint64_t n, bool ascii) {
  const std::uint64_t padded = (n + kBlockSize - 1) / kBlockSize * kBlockSize;
  return crypto::kHeaderSize + (ascii ? base64_safe_length(padded) : padded);
}

std::vector<SpaceRow> run_space_bench(std::span<const std::uint64_t> sizes, bool ascii,
                                      const fs::path& workdir) {
  ScratchDir scratch(workdir);
  Stack stack(scratch.path(), ascii);
  std::mt19937_64 rng(0x5EED);
  std::vector<SpaceRow> rows;
  for (std::uint64_t n : sizes) {
    const wire::Handle h = stack.service.create(stack.dir, "sample", 0600, stack.caller);
    const Bytes data = synthetic(n, rng);
    for (std::uint64_t off = 0; off < n; off += wire::kMaxIoChunk) {
      const auto len = std::min<std::uint64_t>(wire::kMaxIoChunk, n - off);
      stack.service.write(h, off, ByteSpan(data).subspan(off, len), stack.caller);
    }
    SpaceRow row;
    row.size_in = n;
    row.size_out = fs::file_size(stack.only_file());
    row.ratio = n == 0 ? std::numeric_limits<double>::infinity()
                       : static_cast<double>(row.size_out) / static_cast<double>(n);
    rows.push_back(row);
    stack.service.remove_entry(stack.dir, "sample", stack.caller);
  }
  return rows;
}

std::vector<TimeRow> run_time_bench(std::span<const std::uint64_t> sizes, unsigned repetitions,
                                    const fs::path& workdir) {
  using Clock = std::chrono::steady_clock;
  ScratchDir scratch(workdir);
  Stack stack(scratch.path(), false);
  std::mt19937_64 rng(0x71AE);

  crypto::Key128 mask_key{};
  crypto::random_bytes(mask_key);
  const crypto::MaskStream mask(mask_key, crypto::kDefaultMaskBlocks);
  const fs::path plain_path = scratch.path() / "baseline.bin";

  std::vector<Bytes> inputs;
  for (std::uint64_t n : sizes) inputs.push_back(synthetic(n, rng));
  std::vector<std::vector<std::uint64_t>> full(sizes.size()), base(sizes.size());

  for (unsigned round = 0; round < repetitions + kWarmupRounds; ++round) {
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const Bytes& data = inputs[s];

      const wire::Handle h = stack.service.create(stack.dir, "timed", 0600, stack.caller);
      const auto t0 = Clock::now();
      stack.service.write(h, 0, data, stack.caller);
      const auto t1 = Clock::now();
      stack.service.remove_entry(stack.dir, "timed", stack.caller);

      BackingFile plain = BackingFile::create(plain_path, 0600);
      const auto b0 = Clock::now();
      Bytes work(data.begin(), data.end());
      for (std::size_t off = 0; off < work.size(); off += kBlockSize) {
        xor_into(work.data() + off, mask.block(off / kBlockSize),
                 std::min(kBlockSize, work.size() - off));
      }
      plain.write_at(0, work);
      const auto b1 = Clock::now();
      plain = BackingFile();
      fs::remove(plain_path);

      if (round >= kWarmupRounds) {
        full[s].push_back(static_cast<std::uint64_t>((t1 - t0).count()));
        base[s].push_back(static_cast<std::uint64_t>((b1 - b0).count()));
      }
    }
  }

  std::vector<TimeRow> rows;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    TimeRow row;
    row.size_in = sizes[s];
    row.median_ns = median(full[s]);
    row.baseline_ns = median(base[s]);
    row.ns_per_byte = sizes[s] == 0 ? 0.0
                                    : static_cast<double>(row.median_ns) /
                                          static_cast<double>(sizes[s]);
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(const std::vector<SpaceRow>& rows) {
  std::ostringstream os;
  os << "size_in,size_out,ratio\n";
  for (const auto& r : rows) os << r.size_in << ',' << r.size_out << ',' << ratio_text(r.ratio) << '\n';
  return os.str();
}

std::string to_csv(const std::vector<TimeRow>& rows) {
  std::ostringstream os;
  os << "size_in,median_ns,ns_per_byte,baseline_ns\n";
  for (const auto& r : rows) {
    os << r.size_in << ',' << r.median_ns << ',' << ratio_text(r.ns_per_byte) << ','
       << r.baseline_ns << '\n';
  }
  return os.str();
}

std::string to_json(const std::vector<SpaceRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"size_in", r.size_in}, {"size_out", r.size_out}};
    row["ratio"] = std::isfinite(r.ratio) ? nlohmann::json(r.ratio) : nlohmann::json(nullptr);
    out.push_back(std::move(row));
  }
  return out.dump(2) + "\n";
}

std::string to_json(const std::vector<TimeRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"size_in", r.size_in},
                   {"median_ns", r.median_ns},
                   {"ns_per_byte", r.ns_per_byte},
                   {"baseline_ns", r.baseline_ns}});
  }
  return out.dump(2) + "\n";
}

}  // namespace efs::bench
