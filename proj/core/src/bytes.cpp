// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/bytes.hpp"

#include <algorithm>
#include <stdexcept>

namespace dmx {

Word true_word() {
  Word w{};
  w[kWordSize - 1] = 1;
  return w;
}

Word false_word() { return Word{}; }

Word bool_word(bool b) { return b ? true_word() : false_word(); }

bool is_true_word(const Word& w) { return w == true_word(); }

Word to_word(const Digest& d) {
  Word w;
  std::copy(d.bytes.begin(), d.bytes.end(), w.begin());
  return w;
}

Digest to_digest(const Word& w) {
  Digest d;
  std::copy(w.begin(), w.end(), d.bytes.begin());
  return d;
}

std::uint64_t trailing_u64(const Word& w) {
  std::uint64_t v = 0;
  for (std::size_t i = kWordSize - 8; i < kWordSize; ++i) {
    v = (v << 8) | w[i];
  }
  return v;
}

Word word_with_trailing_u64(std::uint64_t v) {
  Word w{};
  for (std::size_t i = 0; i < 8; ++i) {
    w[kWordSize - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  return w;
}

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteSpan data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

std::string to_hex(const Word& w) { return to_hex(span_of(w)); }
std::string to_hex(const Digest& d) { return to_hex(span_of(d)); }

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw std::invalid_argument("hex string has odd length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw std::invalid_argument("invalid hex digit");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

Word word_from_hex(std::string_view hex) {
  Bytes b = from_hex(hex);
  if (b.size() != kWordSize) {
    throw std::invalid_argument("expected 64 hex chars for a word");
  }
  Word w;
  std::copy(b.begin(), b.end(), w.begin());
  return w;
}

Digest digest_from_hex(std::string_view hex) {
  return to_digest(word_from_hex(hex));
}

}  // namespace dmx
