// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/crypto.hpp"

#include <openssl/evp.h>

#include <cassert>
#include <stdexcept>

namespace dmx {

namespace {

struct Sha256Ctx {
  EVP_MD_CTX* ctx;

  Sha256Ctx() : ctx(EVP_MD_CTX_new()) {
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  ~Sha256Ctx() { EVP_MD_CTX_free(ctx); }

  void update(ByteSpan part) {
    if (EVP_DigestUpdate(ctx, part.data(), part.size()) != 1) {
      throw std::runtime_error("sha256 update failed");
    }
  }

  Digest finish() {
    Digest d;
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, d.bytes.data(), &len) != 1 || len != kWordSize) {
      throw std::runtime_error("sha256 final failed");
    }
    return d;
  }
};

}  // namespace

Digest sha256(ByteSpan data) { return sha256_cat({data}); }

Digest sha256_cat(std::initializer_list<ByteSpan> parts) {
  Sha256Ctx h;
  for (ByteSpan p : parts) h.update(p);
  return h.finish();
}

Word keystream(const EncodingKey& key, std::uint64_t index) {
  std::array<std::uint8_t, 8> be{};
  for (std::size_t i = 0; i < 8; ++i) {
    be[7 - i] = static_cast<std::uint8_t>(index >> (8 * i));
  }
  return to_word(sha256_cat({span_of(key.key), ByteSpan(be.data(), be.size())}));
}

Word encrypt_chunk(const EncodingKey& key, std::uint64_t index, const Word& chunk) {
  Word ks = keystream(key, index);
  Word out;
  for (std::size_t i = 0; i < kWordSize; ++i) out[i] = chunk[i] ^ ks[i];
  return out;
}

Word decrypt_chunk(const EncodingKey& key, std::uint64_t index, const Word& chunk) {
  return encrypt_chunk(key, index, chunk);
}

EncryptionMask EncryptionMask::full() {
  EncryptionMask m;
  m.header.fill(0xff);
  m.rows.fill(0xff);
  return m;
}

bool EncryptionMask::is_full() const { return *this == full(); }

Word encrypt_chunk_masked(const EncodingKey& key, std::uint64_t index,
                          const Word& chunk, const Word& mask) {
  Word ks = keystream(key, index);
  Word out;
  for (std::size_t i = 0; i < kWordSize; ++i) {
    out[i] = chunk[i] ^ (ks[i] & mask[i]);
  }
  return out;
}

}  // namespace dmx
