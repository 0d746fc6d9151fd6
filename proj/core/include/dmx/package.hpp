// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmx/circuit.hpp"
#include "dmx/crypto.hpp"
#include "dmx/data.hpp"
#include "dmx/pom.hpp"

namespace dmx {

// f(D) as delivered to the buyer: each data chunk and each evaluation-
// transcript wire encrypted with its keystream index (wires are offset by
// the chunk count), committed under one Merkle root. The mask is the
// selective-encryption layout; wires are always fully encrypted.
struct EncodedPackage {
  std::vector<Word> enc_chunks;
  std::vector<Word> enc_wires;
  Digest circuit_digest{};
  Digest root{};
  EncryptionMask mask = EncryptionMask::full();

  std::size_t leaf_count() const { return enc_chunks.size() + enc_wires.size(); }
  std::vector<Word> leaves() const;  // enc_chunks then enc_wires

  std::string to_json() const;
  static EncodedPackage parse(std::string_view json_text);  // MalformedPackage

  bool operator==(const EncodedPackage&) const = default;
};

// ArityMismatch if |blob.chunks| != circuit.num_inputs.
EncodedPackage encode_package(const DataBlob& blob, const PredicateCircuit& circuit,
                              const EncodingKey& key,
                              const EncryptionMask& mask = EncryptionMask::full());

// The buyer's pre-payment check (the phi-prime role): commitment and digest
// equality plus leaf-count shape. Performs no decryption. The circuit, when
// given, pins the expected chunk/wire counts.
bool verify_package(const EncodedPackage& pkg, const Digest& agreed_root,
                    const Digest& agreed_circuit_digest,
                    const PredicateCircuit* circuit = nullptr);

// Decrypt the chunks and evaluate the circuit over them.
std::pair<DataBlob, bool> decode(const EncodedPackage& pkg, const EncodingKey& key,
                                 const PredicateCircuit& circuit);

// Buyer-side complaint construction. nullopt iff the decrypted transcript
// is consistent at every gate and the output wire decrypts to true.
// Otherwise returns BadOutput, or BadGate for the smallest inconsistent
// gate, with Merkle paths for the involved leaves.
std::optional<MisbehaviorProof> generate_pom(const EncodedPackage& pkg,
                                             const EncodingKey& key,
                                             const PredicateCircuit& circuit);

// Recompute the commitment from the ciphertext leaves.
Digest package_root(const EncodedPackage& pkg);

// Key-independent identity of the plaintext data, used for provenance.
Digest data_merkle_id(const DataBlob& blob);

}  // namespace dmx
