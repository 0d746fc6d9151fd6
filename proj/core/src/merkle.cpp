// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/merkle.hpp"

#include "dmx/error.hpp"

namespace dmx {

namespace {
constexpr std::uint8_t kLeafPrefix = 0x00;
constexpr std::uint8_t kNodePrefix = 0x01;
}  // namespace

Digest merkle_leaf_hash(ByteSpan leaf) {
  return sha256_cat({ByteSpan(&kLeafPrefix, 1), leaf});
}

Digest merkle_node_hash(const Digest& left, const Digest& right) {
  return sha256_cat({ByteSpan(&kNodePrefix, 1), span_of(left), span_of(right)});
}

std::size_t merkle_depth(std::size_t leaf_count) {
  std::size_t depth = 0;
  std::size_t width = 1;
  while (width < leaf_count) {
    width *= 2;
    ++depth;
  }
  return depth;
}

MerkleTree MerkleTree::build(std::vector<Digest> leaf_hashes) {
  if (leaf_hashes.empty()) {
    fail(Errc::EmptyLeaves, "merkle tree needs at least one leaf");
  }
  MerkleTree t;
  t.leaf_count_ = leaf_hashes.size();
  t.levels_.push_back(std::move(leaf_hashes));
  while (t.levels_.back().size() > 1) {
    const auto& prev = t.levels_.back();
    std::vector<Digest> next;
    next.reserve((prev.size() + 1) / 2);
    for (std::size_t i = 0; i < prev.size(); i += 2) {
      const Digest& left = prev[i];
      const Digest& right = (i + 1 < prev.size()) ? prev[i + 1] : prev[i];
      next.push_back(merkle_node_hash(left, right));
    }
    t.levels_.push_back(std::move(next));
  }
  return t;
}

MerkleTree MerkleTree::from_leaves(std::span<const Bytes> leaves) {
  std::vector<Digest> hashes;
  hashes.reserve(leaves.size());
  for (const Bytes& l : leaves) hashes.push_back(merkle_leaf_hash(span_of(l)));
  return build(std::move(hashes));
}

MerkleTree MerkleTree::from_words(std::span<const Word> leaves) {
  std::vector<Digest> hashes;
  hashes.reserve(leaves.size());
  for (const Word& l : leaves) hashes.push_back(merkle_leaf_hash(span_of(l)));
  return build(std::move(hashes));
}

MerkleProof MerkleTree::prove(std::size_t index) const {
  if (index >= leaf_count_) {
    fail(Errc::IndexOutOfRange, "leaf index " + std::to_string(index) +
                                    " out of range for " +
                                    std::to_string(leaf_count_) + " leaves");
  }
  MerkleProof proof;
  proof.leaf_index = index;
  std::size_t pos = index;
  for (std::size_t level = 0; level + 1 < levels_.size(); ++level) {
    const auto& nodes = levels_[level];
    std::size_t sib = pos ^ 1;
    // An odd tail node is paired with itself.
    if (sib >= nodes.size()) sib = pos;
    proof.path.push_back({nodes[sib], (pos & 1) != 0});
    pos /= 2;
  }
  return proof;
}

Digest merkle_root(std::span<const Bytes> leaves) {
  return MerkleTree::from_leaves(leaves).root();
}

Digest merkle_root_words(std::span<const Word> leaves) {
  return MerkleTree::from_words(leaves).root();
}

MerkleProof merkle_prove(std::span<const Bytes> leaves, std::size_t index) {
  return MerkleTree::from_leaves(leaves).prove(index);
}

bool merkle_verify(const Digest& root, ByteSpan leaf, const MerkleProof& proof) {
  Digest cur = merkle_leaf_hash(leaf);
  for (const MerkleStep& step : proof.path) {
    cur = step.sibling_on_left ? merkle_node_hash(step.sibling, cur)
                               : merkle_node_hash(cur, step.sibling);
  }
  return cur == root;
}

}  // namespace dmx
