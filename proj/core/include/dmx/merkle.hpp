// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmx/bytes.hpp"
#include "dmx/crypto.hpp"

namespace dmx {

// Tree shape is fixed: leaf = sha256(0x00 || data), node = sha256(0x01 ||
// left || right), a level with an odd node count duplicates its last node.

struct MerkleStep {
  Digest sibling;
  bool sibling_on_left = false;
  auto operator<=>(const MerkleStep&) const = default;
};

struct MerkleProof {
  std::uint64_t leaf_index = 0;
  std::vector<MerkleStep> path;
  auto operator<=>(const MerkleProof&) const = default;
};

Digest merkle_leaf_hash(ByteSpan leaf);
Digest merkle_node_hash(const Digest& left, const Digest& right);

// ceil(log2(leaf_count)); the path length of every proof for that tree.
std::size_t merkle_depth(std::size_t leaf_count);

class MerkleTree {
 public:
  static MerkleTree from_leaves(std::span<const Bytes> leaves);  // EmptyLeaves
  static MerkleTree from_words(std::span<const Word> leaves);

  const Digest& root() const { return levels_.back().front(); }
  std::size_t leaf_count() const { return leaf_count_; }
  MerkleProof prove(std::size_t index) const;  // IndexOutOfRange

 private:
  static MerkleTree build(std::vector<Digest> leaf_hashes);

  std::size_t leaf_count_ = 0;
  std::vector<std::vector<Digest>> levels_;  // levels_[0] = leaf hashes
};

Digest merkle_root(std::span<const Bytes> leaves);
Digest merkle_root_words(std::span<const Word> leaves);
MerkleProof merkle_prove(std::span<const Bytes> leaves, std::size_t index);

bool merkle_verify(const Digest& root, ByteSpan leaf, const MerkleProof& proof);

}  // namespace dmx
