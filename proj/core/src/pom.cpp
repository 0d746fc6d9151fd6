// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/pom.hpp"

#include <nlohmann/json.hpp>

#include "dmx/error.hpp"

namespace dmx {

using nlohmann::json;

std::string_view pom_kind_name(PomKind k) {
  return k == PomKind::BadOutput ? "bad_output" : "bad_gate";
}

std::string MisbehaviorProof::to_json() const {
  json j;
  j["kind"] = std::string(pom_kind_name(kind));
  j["gate"] = gate;
  json leaves_json = json::array();
  for (const ProofLeaf& leaf : leaves) {
    json path = json::array();
    for (const MerkleStep& step : leaf.path.path) {
      path.push_back(json::array({to_hex(step.sibling), step.sibling_on_left ? 1 : 0}));
    }
    json l;
    l["index"] = leaf.index;
    l["ciphertext"] = to_hex(leaf.ciphertext);
    l["leaf_index"] = leaf.path.leaf_index;
    l["path"] = std::move(path);
    leaves_json.push_back(std::move(l));
  }
  j["leaves"] = std::move(leaves_json);
  return j.dump();
}

MisbehaviorProof MisbehaviorProof::parse(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Errc::MalformedPackage, "unparseable proof");
  }
  try {
    MisbehaviorProof p;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "bad_output") {
      p.kind = PomKind::BadOutput;
    } else if (kind == "bad_gate") {
      p.kind = PomKind::BadGate;
    } else {
      fail(Errc::MalformedPackage, "unknown proof kind " + kind);
    }
    p.gate = j.at("gate").get<std::uint32_t>();
    for (const json& l : j.at("leaves")) {
      ProofLeaf leaf;
      leaf.index = l.at("index").get<std::uint64_t>();
      leaf.ciphertext = word_from_hex(l.at("ciphertext").get<std::string>());
      leaf.path.leaf_index = l.at("leaf_index").get<std::uint64_t>();
      for (const json& s : l.at("path")) {
        leaf.path.path.push_back(
            {digest_from_hex(s.at(0).get<std::string>()), s.at(1).get<int>() != 0});
      }
      p.leaves.push_back(std::move(leaf));
    }
    return p;
  } catch (const json::exception& e) {
    fail(Errc::MalformedPackage, e.what());
  } catch (const std::invalid_argument& e) {
    fail(Errc::MalformedPackage, e.what());
  }
}

Digest MisbehaviorProof::digest() const {
  std::string text = to_json();
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
}

bool verify_pom(const Digest& root, const PredicateCircuit& circuit,
                const EncodingKey& key, const MisbehaviorProof& proof,
                const EncryptionMask& mask) {
  try {
    circuit.validate();
  } catch (const Error&) {
    return false;
  }
  const std::uint64_t n = circuit.num_inputs;
  const std::uint64_t total = n + circuit.size();
  const std::size_t depth = merkle_depth(total);

  // Expected leaf set for the claim.
  std::vector<std::uint64_t> expected;
  if (proof.kind == PomKind::BadOutput) {
    expected = {n + circuit.size() - 1};
  } else {
    if (proof.gate >= circuit.size()) return false;
    const Gate& g = circuit.gates[proof.gate];
    expected = {n + proof.gate};
    if (g.op == GateOp::Input) {
      expected.push_back(g.input_index);
    } else {
      for (std::uint32_t a : g.args) expected.push_back(n + a);
    }
  }
  if (proof.leaves.size() != expected.size()) return false;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const ProofLeaf& leaf = proof.leaves[i];
    if (leaf.index != expected[i]) return false;
    if (leaf.index >= total) return false;
    if (leaf.path.leaf_index != leaf.index) return false;
    if (leaf.path.path.size() != depth) return false;
    if (!merkle_verify(root, span_of(leaf.ciphertext), leaf.path)) return false;
  }

  auto decrypt_leaf = [&](const ProofLeaf& leaf) {
    if (leaf.index < n) {
      return decrypt_chunk_masked(key, leaf.index, leaf.ciphertext,
                                  mask.mask_for(leaf.index));
    }
    return decrypt_chunk(key, leaf.index, leaf.ciphertext);
  };

  if (proof.kind == PomKind::BadOutput) {
    return !is_true_word(decrypt_leaf(proof.leaves[0]));
  }
  Word claimed_out = decrypt_leaf(proof.leaves[0]);
  std::vector<Word> operands;
  for (std::size_t i = 1; i < proof.leaves.size(); ++i) {
    operands.push_back(decrypt_leaf(proof.leaves[i]));
  }
  Word expected_out = apply_gate(circuit.gates[proof.gate], operands);
  return claimed_out != expected_out;
}

}  // namespace dmx
