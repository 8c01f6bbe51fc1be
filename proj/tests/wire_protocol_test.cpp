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

#include <random>

#include "common/error.hpp"
#include "daemon/dispatch.hpp"
#include "daemon/service.hpp"
#include "doctest.h"
#include "support/checks.hpp"
#include "support/oracle.hpp"
#include "wire/protocol.hpp"

using namespace efs;
using namespace efs::wire;
using efs::testing::as_int;
using efs::testing::errc_of;
using efs::testing::from_hex;
using efs::testing::to_hex;

namespace {

Handle counting_handle() {
  Handle h{};
  for (int i = 0; i < 32; ++i) h[i] = static_cast<std::uint8_t>(i);
  return h;
}

std::string random_string(std::mt19937_64& rng, std::size_t max) {
  std::string s(rng() % (max + 1), '\0');
  for (auto& c : s) c = static_cast<char>(rng());
  return s;
}

Handle random_handle(std::mt19937_64& rng) {
  Handle h{};
  for (auto& b : h) b = static_cast<std::uint8_t>(rng());
  return h;
}

RequestBody random_body(std::mt19937_64& rng) {
  switch (rng() % 14) {
    case 0: {
      auto pass = efs::testing::random_bytes(rng, rng() % 64);
      return AttachRequest{random_string(rng, 50), random_string(rng, 20),
                           Bytes(pass.begin(), pass.end()), (rng() & 1) != 0};
    }
    case 1: return DetachRequest{random_string(rng, 20)};
    case 2: return LookupRequest{random_handle(rng), random_string(rng, 30)};
    case 3: return GetattrRequest{random_handle(rng)};
    case 4: return ReadRequest{random_handle(rng), rng(), rng()};
    case 5: {
      auto d = efs::testing::random_bytes(rng, rng() % 300);
      return WriteRequest{random_handle(rng), rng(), Bytes(d.begin(), d.end())};
    }
    case 6: return CreateRequest{random_handle(rng), random_string(rng, 30),
                                 static_cast<std::uint32_t>(rng())};
    case 7: return MkdirRequest{random_handle(rng), random_string(rng, 30),
                                static_cast<std::uint32_t>(rng())};
    case 8: return RemoveRequest{random_handle(rng), random_string(rng, 30)};
    case 9: return RenameRequest{random_handle(rng), random_string(rng, 30), random_handle(rng),
                                 random_string(rng, 30)};
    case 10: return ReaddirRequest{random_handle(rng), rng(), static_cast<std::uint32_t>(rng())};
    case 11: return SymlinkRequest{random_handle(rng), random_string(rng, 30),
                                   random_string(rng, 200)};
    case 12: return ReadlinkRequest{random_handle(rng)};
    default: return ListAttachesRequest{};
  }
}

}  // namespace

TEST_CASE("READ request golden frame") {
  Request r{7, ReadRequest{counting_handle(), 0, 16}};
  CHECK(to_hex(encode_request(r)) ==
        "000000380000000700050001000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f"
        "00000000000000000000000000000010");
  CHECK(decode_request(from_hex(to_hex(encode_request(r)))) == r);
}

TEST_CASE("READ response golden frames") {
  Response ok{7, 5, RpcStatus::Ok, ReadReply{Bytes{'a', 'b', 'c'}}};
  CHECK(to_hex(encode_response(ok)) == "000000110000000700050001000000000003616263");
  Response stale{7, 5, RpcStatus::Stale, EmptyReply{}};
  CHECK(to_hex(encode_response(stale)) == "0000000a00000007000500010004");
  CHECK(decode_response(encode_response(ok)) == ok);
  CHECK(decode_response(encode_response(stale)).status == RpcStatus::Stale);
}

TEST_CASE("requests roundtrip through the codec") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20000; ++t) {
    Request r{static_cast<std::uint32_t>(rng()), random_body(rng)};
    Bytes frame = encode_request(r);
    REQUIRE(frame_size(frame).value() == frame.size());
    REQUIRE(decode_request(frame) == r);
  }
}

TEST_CASE("malformed requests are rejected") {
  Bytes frame = encode_request(Request{9, GetattrRequest{counting_handle()}});
  Bytes v2 = frame;
  v2[11] = 2;
  CHECK(errc_of([&] { decode_request(v2); }) == as_int(Errc::BadMessage));
  Bytes op = frame;
  op[9] = 99;
  CHECK(errc_of([&] { decode_request(op); }) == as_int(Errc::BadMessage));
  Bytes trailing = frame;
  trailing.push_back(0);
  trailing[3] += 1;
  CHECK(errc_of([&] { decode_request(trailing); }) == as_int(Errc::BadMessage));
  Bytes truncated(frame.begin(), frame.end() - 1);
  truncated[3] -= 1;
  CHECK(errc_of([&] { decode_request(truncated); }) == as_int(Errc::BadMessage));
}

TEST_CASE("server answers BADMSG and echoes the xid") {
  daemon::Service service;
  Bytes frame = encode_request(Request{0xdeadbeef, GetattrRequest{counting_handle()}});
  frame[11] = 2;
  Response r = decode_response(daemon::handle_frame(service, frame, {0}));
  CHECK(r.status == RpcStatus::BadMsg);
  CHECK(r.xid == 0xdeadbeef);
  CHECK(std::holds_alternative<EmptyReply>(r.body));
}

TEST_CASE("unknown handles are STALE with an empty body") {
  daemon::Service service;
  Handle h = counting_handle();
  Bytes raw = daemon::handle_frame(service, encode_request(Request{44, ReadRequest{h, 0, 16}}),
                                   {0});
  CHECK(raw.size() == 14);
  Response r = decode_response(raw);
  CHECK(r.xid == 44);
  CHECK(r.status == RpcStatus::Stale);
}

TEST_CASE("ListAttaches on an idle service is empty") {
  daemon::Service service;
  Response r = decode_response(
      daemon::handle_frame(service, encode_request(Request{1, ListAttachesRequest{}}), {0}));
  REQUIRE(r.status == RpcStatus::Ok);
  CHECK(std::get<ListAttachesReply>(r.body).names.empty());
}

TEST_CASE("error codes map onto wire statuses") {
  using daemon::status_for;
  CHECK(status_for(Errc::NotFound) == RpcStatus::NoEnt);
  CHECK(status_for(Errc::Access) == RpcStatus::Acces);
  CHECK(status_for(Errc::BadKey) == RpcStatus::BadKey);
  CHECK(status_for(Errc::Stale) == RpcStatus::Stale);
  CHECK(status_for(Errc::Exists) == RpcStatus::Exist);
  CHECK(status_for(Errc::NameTooLong) == RpcStatus::NameTooLong);
  CHECK(status_for(Errc::NotEmpty) == RpcStatus::NotEmpty);
  CHECK(status_for(Errc::CrossAttach) == RpcStatus::CrossAttach);
  CHECK(status_for(Errc::CorruptHeader) == RpcStatus::Io);
  CHECK(status_for(Errc::BadMessage) == RpcStatus::BadMsg);
}
