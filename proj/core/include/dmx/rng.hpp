// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>

#include "dmx/bytes.hpp"

namespace dmx {

// splitmix64. Scenario runs must be byte-identical across platforms, and
// std:: distributions are not bit-stable between standard libraries, so all
// simulation randomness goes through this generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, n); n == 0 yields 0. Modulo bias is irrelevant
  // at simulation scale.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  bool coin() { return (next() & 1) != 0; }

  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t v = next();
      for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
        out[i] = static_cast<std::uint8_t>(v >> (8 * b));
      }
    }
  }

  Word word() {
    Word w;
    fill(w);
    return w;
  }

  // Derive an independent stream without disturbing this generator.
  SplitMix64 fork(std::uint64_t stream) const {
    SplitMix64 g(state_ ^ ((stream + 0x632be59bd9b4e019ULL) * 0x9e3779b97f4a7c15ULL));
    g.next();
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace dmx
