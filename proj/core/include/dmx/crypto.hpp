// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

#include "dmx/bytes.hpp"

namespace dmx {

// SHA-256, fixed so digests, commitments and logs are bit-identical across
// implementations and platforms.
Digest sha256(ByteSpan data);
Digest sha256_cat(std::initializer_list<ByteSpan> parts);

// Key for the chunkwise stream encoding. This is the paper-level f / f^-1
// pair: f XORs each 32-byte chunk with a per-index keystream word, so the
// inverse is the same operation with the same key.
struct EncodingKey {
  Word key{};
  auto operator<=>(const EncodingKey&) const = default;
};

// Keystream word i = sha256(key || i as 8-byte big-endian).
Word keystream(const EncodingKey& key, std::uint64_t index);

Word encrypt_chunk(const EncodingKey& key, std::uint64_t index, const Word& chunk);
Word decrypt_chunk(const EncodingKey& key, std::uint64_t index, const Word& chunk);

// Byte mask controlling which bytes of a chunk are encrypted (0xff) and
// which stay in clear (0x00). Selective layouts leave agreed columns of a
// tabular chunk readable by the mediator; everything else is masked.
struct EncryptionMask {
  Word header{};  // applied to chunk 0
  Word rows{};    // applied to every later chunk

  static EncryptionMask full();
  const Word& mask_for(std::uint64_t chunk_index) const {
    return chunk_index == 0 ? header : rows;
  }
  bool is_full() const;
  auto operator<=>(const EncryptionMask&) const = default;
};

Word encrypt_chunk_masked(const EncodingKey& key, std::uint64_t index,
                          const Word& chunk, const Word& mask);
inline Word decrypt_chunk_masked(const EncodingKey& key, std::uint64_t index,
                                 const Word& chunk, const Word& mask) {
  return encrypt_chunk_masked(key, index, chunk, mask);
}

}  // namespace dmx
