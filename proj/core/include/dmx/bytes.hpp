// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dmx {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

inline constexpr std::size_t kWordSize = 32;

// 32-byte value: a data chunk or a circuit wire value. Boolean results are
// encoded as all-zero (false) and 0x00..01 (true).
using Word = std::array<std::uint8_t, kWordSize>;

// 32-byte hash output. Kept distinct from Word so commitments and payload
// words do not mix silently.
struct Digest {
  std::array<std::uint8_t, kWordSize> bytes{};
  auto operator<=>(const Digest&) const = default;
};

Word true_word();
Word false_word();
Word bool_word(bool b);
bool is_true_word(const Word& w);

Word to_word(const Digest& d);
Digest to_digest(const Word& w);

// Bytes 24..31 read as a big-endian unsigned integer (row counts, bounds).
std::uint64_t trailing_u64(const Word& w);
Word word_with_trailing_u64(std::uint64_t v);

std::string to_hex(ByteSpan data);
std::string to_hex(const Word& w);
std::string to_hex(const Digest& d);

// Throw std::invalid_argument on non-hex input or odd length.
Bytes from_hex(std::string_view hex);
Word word_from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

inline ByteSpan span_of(const Word& w) { return {w.data(), w.size()}; }
inline ByteSpan span_of(const Digest& d) { return {d.bytes.data(), d.bytes.size()}; }
inline ByteSpan span_of(const Bytes& b) { return {b.data(), b.size()}; }

}  // namespace dmx
