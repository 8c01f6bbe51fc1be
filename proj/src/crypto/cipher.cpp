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

#include "crypto/cipher.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <climits>

#include "common/error.hpp"

namespace efs::crypto {

namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const noexcept { EVP_CIPHER_CTX_free(c); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CtxPtr make_ctx(const EVP_CIPHER* cipher, const std::uint8_t* key, const std::uint8_t* iv,
                bool encrypt) {
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx || EVP_CipherInit_ex(ctx.get(), cipher, nullptr, key, iv, encrypt ? 1 : 0) != 1) {
    throw Error(Errc::Io, "cipher init failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  return ctx;
}

void run(EVP_CIPHER_CTX* ctx, ByteSpan in, std::span<std::uint8_t> out) {
  if (in.size() % kBlockSize != 0 || out.size() != in.size()) {
    throw Error(Errc::InvalidArgument, "cipher input must be whole blocks");
  }
  std::size_t done = 0;
  while (done < in.size()) {
    const std::size_t chunk = std::min<std::size_t>(in.size() - done, 1u << 30);
    int outl = 0;
    if (EVP_CipherUpdate(ctx, out.data() + done, &outl, in.data() + done,
                         static_cast<int>(chunk)) != 1 ||
        static_cast<std::size_t>(outl) != chunk) {
      throw Error(Errc::Io, "cipher update failed");
    }
    done += chunk;
  }
}

}  // namespace

struct Aes128::Contexts {
  CtxPtr enc;
  CtxPtr dec;
};

Aes128::Aes128(const Key128& key)
    : ctx_(std::make_unique<Contexts>(Contexts{
          make_ctx(EVP_aes_128_ecb(), key.data(), nullptr, true),
          make_ctx(EVP_aes_128_ecb(), key.data(), nullptr, false)})) {}

Aes128::~Aes128() = default;
Aes128::Aes128(Aes128&&) noexcept = default;
Aes128& Aes128::operator=(Aes128&&) noexcept = default;

void Aes128::encrypt(ByteSpan in, std::span<std::uint8_t> out) { run(ctx_->enc.get(), in, out); }
void Aes128::decrypt(ByteSpan in, std::span<std::uint8_t> out) { run(ctx_->dec.get(), in, out); }

Bytes ofb_keystream(const Key128& key, std::size_t blocks) {
  const std::uint8_t zero_iv[16] = {};
  auto ctx = make_ctx(EVP_aes_128_ofb(), key.data(), zero_iv, true);
  Bytes stream(blocks * kBlockSize, 0);
  run(ctx.get(), stream, stream);
  return stream;
}

Key128 pbkdf2_sha256(ByteSpan passphrase, ByteSpan salt, unsigned iterations) {
  Key128 out{};
  if (passphrase.size() > INT_MAX || salt.size() > INT_MAX || iterations > INT_MAX ||
      PKCS5_PBKDF2_HMAC(reinterpret_cast<const char*>(passphrase.data()),
                        static_cast<int>(passphrase.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(iterations),
                        EVP_sha256(), static_cast<int>(out.size()), out.data()) != 1) {
    throw Error(Errc::Io, "key derivation failed");
  }
  return out;
}

std::array<std::uint8_t, 32> hmac_sha256(ByteSpan key, ByteSpan data) {
  std::array<std::uint8_t, 32> out{};
  unsigned len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
           out.data(), &len) == nullptr ||
      len != out.size()) {
    throw Error(Errc::Io, "hmac failed");
  }
  return out;
}

void random_bytes(std::span<std::uint8_t> out) {
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(Errc::Io, "random source failed");
  }
}

}  // namespace efs::crypto
