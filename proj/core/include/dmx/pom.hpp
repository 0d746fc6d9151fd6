// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmx/circuit.hpp"
#include "dmx/crypto.hpp"
#include "dmx/merkle.hpp"

namespace dmx {

// Proof of misbehavior: a gate-local demonstration that a committed
// encoding is wrong, carrying only the involved ciphertext leaves and their
// Merkle paths. Leaf indices are global over the committed tree: chunk i at
// index i, wire of gate g at index num_inputs + g.
//
// BadOutput: the decrypted output wire is not the true word (one leaf).
// BadGate(g): gate g's decrypted output wire does not equal the gate
// applied to its decrypted operand leaves (1 + arity leaves, in the order
// output, then operands).
enum class PomKind : std::uint8_t { BadOutput, BadGate };

std::string_view pom_kind_name(PomKind k);

struct ProofLeaf {
  std::uint64_t index = 0;
  Word ciphertext{};
  MerkleProof path;
  bool operator==(const ProofLeaf&) const = default;
};

struct MisbehaviorProof {
  PomKind kind = PomKind::BadOutput;
  std::uint32_t gate = 0;  // BadGate only
  std::vector<ProofLeaf> leaves;

  Digest digest() const;  // content digest, for the event log
  std::string to_json() const;
  static MisbehaviorProof parse(std::string_view json_text);  // MalformedPackage

  bool operator==(const MisbehaviorProof&) const = default;
};

// Ledger-side verification. True iff every leaf's path verifies against
// `root` at the claimed index with the tree depth implied by the circuit,
// the leaf set matches the claimed kind, and the decrypted values violate
// the gate (or output) as claimed. Deterministic; never touches data beyond
// the included leaves.
bool verify_pom(const Digest& root, const PredicateCircuit& circuit,
                const EncodingKey& key, const MisbehaviorProof& proof,
                const EncryptionMask& mask = EncryptionMask::full());

}  // namespace dmx
