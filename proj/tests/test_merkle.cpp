// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/merkle.hpp"

#include <gtest/gtest.h>

#include <set>

#include "dmx/rng.hpp"
#include "test_util.hpp"

namespace dmx {
namespace {

using dmx_test::to_bytes;

std::vector<Bytes> string_leaves(std::initializer_list<std::string> items) {
  std::vector<Bytes> leaves;
  for (const std::string& s : items) leaves.push_back(to_bytes(s));
  return leaves;
}

// Frozen with an independent implementation of the same tree shape.
TEST(Merkle, SingleLeafRootIsLeafHash) {
  auto leaves = string_leaves({"hello"});
  EXPECT_EQ(to_hex(merkle_root(leaves)),
            "8a2a5c9b768827de5a9552c38a044c66959c68f6d2f21b5260af54d2f87db827");
  EXPECT_EQ(merkle_root(leaves), merkle_leaf_hash(span_of(leaves[0])));
}

TEST(Merkle, TwoLeafRootVector) {
  auto leaves = string_leaves({"hello", "world"});
  EXPECT_EQ(to_hex(merkle_root(leaves)),
            "24233339aadcedf287d262413f03c028eb8db397edd32a2878091151b99bf20f");
  EXPECT_EQ(merkle_root(leaves),
            merkle_node_hash(merkle_leaf_hash(span_of(leaves[0])),
                             merkle_leaf_hash(span_of(leaves[1]))));
}

TEST(Merkle, OddLeafCountDuplicatesLast) {
  auto leaves = string_leaves({"a", "b", "c"});
  EXPECT_EQ(to_hex(merkle_root(leaves)),
            "e9636069c740c9ff51625b01a0b040396d265a9b920cc6febdfa5ecc9f58ecce");
}

TEST(Merkle, EmptyLeavesRejected) {
  std::vector<Bytes> none;
  EXPECT_DMX_ERROR(merkle_root(none), Errc::EmptyLeaves);
}

TEST(Merkle, ProveOutOfRange) {
  auto leaves = string_leaves({"a", "b"});
  EXPECT_DMX_ERROR(merkle_prove(leaves, 2), Errc::IndexOutOfRange);
}

TEST(Merkle, DepthIsCeilLog2) {
  EXPECT_EQ(merkle_depth(1), 0u);
  EXPECT_EQ(merkle_depth(2), 1u);
  EXPECT_EQ(merkle_depth(3), 2u);
  EXPECT_EQ(merkle_depth(4), 2u);
  EXPECT_EQ(merkle_depth(5), 3u);
  EXPECT_EQ(merkle_depth(64), 6u);
  EXPECT_EQ(merkle_depth(65), 7u);
}

TEST(Merkle, ProveThenVerifyAllIndices) {
  SplitMix64 rng(31);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 33u}) {
    std::vector<Word> leaves(n);
    for (Word& w : leaves) w = rng.word();
    MerkleTree tree = MerkleTree::from_words(leaves);
    for (std::size_t i = 0; i < n; ++i) {
      MerkleProof proof = tree.prove(i);
      EXPECT_EQ(proof.path.size(), merkle_depth(n));
      EXPECT_TRUE(merkle_verify(tree.root(), span_of(leaves[i]), proof));
    }
  }
}

TEST(Merkle, PermutingLeavesChangesRoot) {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + rng.below(16);
    std::vector<Word> leaves(n);
    for (Word& w : leaves) w = rng.word();
    std::size_t i = rng.below(n);
    std::size_t j = rng.below(n);
    if (i == j || leaves[i] == leaves[j]) continue;
    Digest before = merkle_root_words(leaves);
    std::swap(leaves[i], leaves[j]);
    ASSERT_NE(before, merkle_root_words(leaves));
  }
}

TEST(Merkle, MutationSoundnessFuzz) {
  SplitMix64 rng(41);
  std::vector<Word> leaves(21);
  for (Word& w : leaves) w = rng.word();
  MerkleTree tree = MerkleTree::from_words(leaves);

  for (int trial = 0; trial < 10'000; ++trial) {
    std::size_t i = rng.below(leaves.size());
    MerkleProof proof = tree.prove(i);
    Word leaf = leaves[i];
    switch (rng.below(3)) {
      case 0:  // flip a leaf byte
        leaf[rng.below(kWordSize)] ^= static_cast<std::uint8_t>(1 + rng.below(255));
        break;
      case 1: {  // corrupt a path entry
        std::size_t at = rng.below(proof.path.size());
        MerkleStep& step = proof.path[at];
        if (rng.coin()) {
          step.sibling.bytes[rng.below(kWordSize)] ^=
              static_cast<std::uint8_t>(1 + rng.below(255));
        } else {
          // Side flips are a no-op when the step pairs a duplicated node
          // with itself, so skip those.
          Digest cur = merkle_leaf_hash(span_of(leaf));
          for (std::size_t s = 0; s < at; ++s) {
            cur = proof.path[s].sibling_on_left
                      ? merkle_node_hash(proof.path[s].sibling, cur)
                      : merkle_node_hash(cur, proof.path[s].sibling);
          }
          if (step.sibling == cur) continue;
          step.sibling_on_left = !step.sibling_on_left;
        }
        break;
      }
      default:  // truncate the path
        proof.path.pop_back();
        break;
    }
    ASSERT_FALSE(merkle_verify(tree.root(), span_of(leaf), proof));
  }
}

TEST(Merkle, VerifyAgainstWrongRootFails) {
  SplitMix64 rng(43);
  std::vector<Word> leaves(8);
  for (Word& w : leaves) w = rng.word();
  MerkleTree tree = MerkleTree::from_words(leaves);
  Digest wrong = tree.root();
  wrong.bytes[0] ^= 1;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    EXPECT_FALSE(merkle_verify(wrong, span_of(leaves[i]), tree.prove(i)));
  }
}

}  // namespace
}  // namespace dmx
