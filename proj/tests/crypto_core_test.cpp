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

#include <fcntl.h>

#include <algorithm>
#include <random>
#include <set>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "crypto/backing_file.hpp"
#include "crypto/cipher.hpp"
#include "crypto/content.hpp"
#include "doctest.h"
#include "support/checks.hpp"
#include "support/oracle.hpp"
#include "support/reference_aes.hpp"

using namespace efs;
using namespace efs::crypto;
using efs::testing::as_int;
using efs::testing::errc_of;
using efs::testing::from_hex;
using efs::testing::to_hex;

namespace {

constexpr const char* kGoldenPass = "0123456789abcdef";
constexpr const char* kGoldenK1 = "1478cd43353afaae67be94cb190d86c6";
constexpr const char* kGoldenK2 = "82babde1d3216ec85eb0b3908a4ec24d";

Key128 key_from_hex(const char* hex) {
  Key128 k{};
  auto raw = from_hex(hex);
  std::copy(raw.begin(), raw.end(), k.begin());
  return k;
}

SubKeyPair golden_keys() { return SubKeyPair(key_from_hex(kGoldenK1), key_from_hex(kGoldenK2)); }

Block iv_a0() {
  Block iv{};
  for (int i = 0; i < 16; ++i) iv[i] = static_cast<std::uint8_t>(0xa0 + i);
  return iv;
}

std::filesystem::path fresh(const efs::testing::TempDir& dir, const char* leaf) {
  return dir / leaf;
}

}  // namespace

TEST_CASE("reference AES matches the FIPS-197 appendix vector") {
  auto key = efs::testing::block_from_hex("000102030405060708090a0b0c0d0e0f");
  auto pt = efs::testing::block_from_hex("00112233445566778899aabbccddeeff");
  efs::testing::ReferenceAes128 aes(key);
  auto ct = aes.encrypt(pt);
  CHECK(to_hex(ct) == "69c4e0d86a7b0430d8cdb78070b4c55a");
  CHECK(aes.decrypt(ct) == pt);
}

TEST_CASE("OpenSSL AES agrees with the reference on random blocks") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto kraw = efs::testing::random_bytes(rng, 16);
    auto praw = efs::testing::random_bytes(rng, 16);
    Key128 k{};
    std::copy(kraw.begin(), kraw.end(), k.begin());
    efs::testing::RefBlock rk{}, rp{};
    std::copy(kraw.begin(), kraw.end(), rk.begin());
    std::copy(praw.begin(), praw.end(), rp.begin());
    Aes128 aes(k);
    Bytes out(16);
    aes.encrypt(praw, out);
    CHECK(to_hex(out) == to_hex(efs::testing::ReferenceAes128(rk).encrypt(rp)));
  }
}

TEST_CASE("golden subkeys from PBKDF2") {
  SubKeyPair keys = derive_subkeys(as_bytes(kGoldenPass));
  CHECK(to_hex(keys.mask_key) == kGoldenK1);
  CHECK(to_hex(keys.block_key) == kGoldenK2);
  CHECK(keys.mask_key != keys.block_key);
}

TEST_CASE("short passphrases are refused") {
  CHECK(errc_of([] { derive_subkeys(as_bytes("fifteen-chars!!")); }) ==
        as_int(Errc::PassphraseTooShort));
  CHECK_NOTHROW(derive_subkeys(as_bytes("sixteen-chars!!!"), 1));
}

TEST_CASE("mask stream golden blocks and OFB definition") {
  MaskStream zero = generate_mask(Key128{}, 1);
  CHECK(to_hex(zero.bytes()) == "66e94bd4ef8a2c3b884cfa59ca342b2e");

  MaskStream m = generate_mask(key_from_hex(kGoldenK1), 4096);
  CHECK(m.period() == 4096);
  CHECK(to_hex(m.block(0), 16) == "6dc4a1f66c574f836dec0c1d94d31501");
  CHECK(to_hex(m.block(1), 16) == "88a8ac14560af4ce984631d8959931bc");
  CHECK(m.block(4096) == m.block(0));
  CHECK(m.block(4097 + 4096) == m.block(1));

  auto oracle = efs::testing::oracle_mask(efs::testing::block_from_hex(kGoldenK1), 4096);
  for (std::size_t j = 0; j < 4096; ++j) REQUIRE(to_hex(m.block(j), 16) == to_hex(oracle[j]));
}

TEST_CASE("seal_block golden vector") {
  ContentKeys keys(golden_keys(), 4096);
  Block plain{};
  const char* text = "EFS golden block";
  std::copy(text, text + 16, plain.begin());
  Block c = seal_block(5, plain, keys.mask, iv_a0(), keys.keys.block_key);
  CHECK(to_hex(c) == "2b879af347398824618a0a559655d55a");
  CHECK(open_block(5, c, keys.mask, iv_a0(), keys.keys.block_key) == plain);
}

TEST_CASE("bulk seal agrees with block seal and inverts") {
  ContentKeys keys(golden_keys(), 8);
  std::mt19937_64 rng(5);
  auto raw = efs::testing::random_bytes(rng, 16 * 40);
  Bytes data(raw.begin(), raw.end());
  Bytes sealed = data;
  seal_blocks(3, sealed, keys, iv_a0());
  for (std::size_t i = 0; i < 40; ++i) {
    Block p{};
    std::copy_n(data.begin() + 16 * i, 16, p.begin());
    Block c = seal_block(3 + i, p, keys.mask, iv_a0(), keys.keys.block_key);
    REQUIRE(std::equal(c.begin(), c.end(), sealed.begin() + 16 * i));
  }
  open_blocks(3, sealed, keys, iv_a0());
  CHECK(sealed == data);
}

TEST_CASE("seal is a bijection on blocks for fixed index and iv") {
  ContentKeys keys(golden_keys(), 16);
  std::set<std::string> seen;
  for (int v = 0; v < 4096; ++v) {
    Block p{};
    p[0] = static_cast<std::uint8_t>(v & 0xff);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    Block c = seal_block(7, p, keys.mask, iv_a0(), keys.keys.block_key);
    seen.insert(to_hex(c));
    REQUIRE(open_block(7, c, keys.mask, iv_a0(), keys.keys.block_key) == p);
  }
  CHECK(seen.size() == 4096);
}

TEST_CASE("header golden bytes and parsing") {
  auto h = build_header(0, Block{}, 0);
  CHECK(to_hex(h) ==
        "4546533100010000000000000000000000000000000000000000000000000000");
  auto h2 = build_header(0x0102030405060708ull, iv_a0(), kFlagAsciiPayload);
  FileHeader parsed = parse_header(h2);
  CHECK(parsed.plaintext_length == 0x0102030405060708ull);
  CHECK(parsed.iv == iv_a0());
  CHECK(parsed.ascii());
  CHECK(parsed.version == 1);
}

TEST_CASE("header corruption is detected") {
  auto good = build_header(10, iv_a0(), 0);
  auto expect_corrupt = [](Bytes b) {
    return errc_of([&] { parse_header(b); }) == as_int(Errc::CorruptHeader);
  };
  CHECK(expect_corrupt(Bytes(good.begin(), good.begin() + 31)));
  Bytes magic(good.begin(), good.end());
  magic[0] = 'X';
  CHECK(expect_corrupt(magic));
  Bytes version(good.begin(), good.end());
  version[5] = 2;
  CHECK(expect_corrupt(version));
  Bytes flags(good.begin(), good.end());
  flags[7] = 0x02;
  CHECK(expect_corrupt(flags));
  Bytes huge(good.begin(), good.end());
  huge[8] = 0x80;
  CHECK(expect_corrupt(huge));
}

TEST_CASE("payload size closed forms") {
  CHECK(payload_size(0, false) == 0);
  CHECK(payload_size(1, false) == 16);
  CHECK(payload_size(16, false) == 16);
  CHECK(payload_size(17, false) == 32);
  CHECK(payload_size(909, false) == 912);
  CHECK(payload_size(0, true) == 0);
  CHECK(payload_size(1, true) == 22);
  CHECK(payload_size(48, true) == 64);
  CHECK(payload_size(909, true) == 1216);
}

TEST_CASE("file contents roundtrip through random writes against a shadow buffer") {
  efs::testing::TempDir dir;
  ContentKeys keys(golden_keys(), 64);
  for (std::uint16_t flags : {std::uint16_t{0}, kFlagAsciiPayload}) {
    CAPTURE(flags);
    auto path = dir / (flags ? "ascii" : "binary");
    BackingFile f = BackingFile::create(path, 0600);
    std::mt19937_64 rng(flags + 99);
    Bytes shadow;
    for (int op = 0; op < 300; ++op) {
      const std::uint64_t off = rng() % 6000;
      const std::size_t len = 1 + rng() % 700;
      auto raw = efs::testing::random_bytes(rng, len);
      REQUIRE(write_range(f, off, raw, keys, flags) == len);
      if (shadow.size() < off + len) shadow.resize(off + len, 0);
      std::copy(raw.begin(), raw.end(), shadow.begin() + static_cast<std::ptrdiff_t>(off));

      const std::uint64_t roff = rng() % (shadow.size() + 20);
      const std::uint64_t rlen = rng() % 900;
      Bytes got = read_range(f, roff, rlen, keys);
      Bytes want;
      if (roff < shadow.size()) {
        const auto end = std::min<std::uint64_t>(shadow.size(), roff + rlen);
        want.assign(shadow.begin() + static_cast<std::ptrdiff_t>(roff),
                    shadow.begin() + static_cast<std::ptrdiff_t>(end));
      }
      REQUIRE(got == want);
    }
    CHECK(read_range(f, 0, shadow.size() + 100, keys) == shadow);
    CHECK(f.size() == kHeaderSize + payload_size(shadow.size(), flags != 0));
  }
}

TEST_CASE("first one-byte write stores one header and one block") {
  efs::testing::TempDir dir;
  ContentKeys keys(golden_keys(), 16);
  BackingFile f = BackingFile::create(fresh(dir, "one"), 0600);
  CHECK(!read_header(f).has_value());
  CHECK(read_range(f, 0, 10, keys).empty());
  const std::uint8_t b = 'x';
  CHECK(write_range(f, 0, ByteSpan(&b, 1), keys) == 1);
  CHECK(f.size() == 48);
  CHECK(read_header(f)->plaintext_length == 1);
  CHECK(write_range(f, 5, ByteSpan{}, keys) == 0);
  CHECK(read_header(f)->plaintext_length == 1);
}

TEST_CASE("writing past EOF zero-fills the gap") {
  efs::testing::TempDir dir;
  ContentKeys keys(golden_keys(), 16);
  BackingFile f = BackingFile::create(fresh(dir, "gap"), 0600);
  write_range(f, 0, as_bytes("abc"), keys);
  write_range(f, 40, as_bytes("Z"), keys);
  Bytes all = read_range(f, 0, 1000, keys);
  REQUIRE(all.size() == 41);
  CHECK(all[0] == 'a');
  CHECK(std::all_of(all.begin() + 3, all.begin() + 40, [](std::uint8_t v) { return v == 0; }));
  CHECK(all[40] == 'Z');
  CHECK(read_range(f, 41, 10, keys).empty());
  CHECK(read_range(f, 39, 10, keys).size() == 2);
}

TEST_CASE("a truncated header surfaces as CorruptHeader") {
  efs::testing::TempDir dir;
  ContentKeys keys(golden_keys(), 16);
  BackingFile f = BackingFile::create(fresh(dir, "short"), 0600);
  write_range(f, 0, as_bytes("hello"), keys);
  f.truncate(20);
  CHECK(errc_of([&] { read_range(f, 0, 5, keys); }) == as_int(Errc::CorruptHeader));
}

TEST_CASE("stored payload equals the brute-force oracle") {
  efs::testing::TempDir dir;
  ContentKeys keys(golden_keys(), 32);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 25; ++t) {
    auto plain = efs::testing::random_bytes(rng, rng() % 1500);
    auto path = dir / ("o" + std::to_string(t));
    BackingFile f = BackingFile::create(path, 0600);
    write_range(f, 0, plain, keys);
    auto stored = efs::testing::slurp(path);
    if (plain.empty()) {
      CHECK(stored.empty());
      continue;
    }
    efs::testing::RefBlock iv{};
    std::copy(stored.begin() + 16, stored.begin() + 32, iv.begin());
    auto want = efs::testing::oracle_encrypt(plain, efs::testing::block_from_hex(kGoldenK1),
                                             efs::testing::block_from_hex(kGoldenK2), 32, iv);
    REQUIRE(to_hex(stored.data() + 32, stored.size() - 32) == to_hex(want));
  }
}

TEST_CASE("identical blocks do not repeat within a period and IVs separate files") {
  efs::testing::TempDir dir;
  ContentKeys keys(golden_keys(), 1024);
  Bytes plain(1024 * 16, 0x41);
  auto p1 = dir / "a";
  auto p2 = dir / "b";
  {
    BackingFile f1 = BackingFile::create(p1, 0600);
    BackingFile f2 = BackingFile::create(p2, 0600);
    write_range(f1, 0, plain, keys);
    write_range(f2, 0, plain, keys);
  }
  auto s1 = efs::testing::slurp(p1);
  auto s2 = efs::testing::slurp(p2);
  std::set<std::string> a, b;
  for (std::size_t i = 32; i < s1.size(); i += 16) a.insert(to_hex(s1.data() + i, 16));
  for (std::size_t i = 32; i < s2.size(); i += 16) b.insert(to_hex(s2.data() + i, 16));
  CHECK(a.size() == 1024);
  CHECK(b.size() == 1024);
  std::size_t shared = 0;
  for (const auto& x : a) shared += b.count(x);
  CHECK(shared == 0);
}
