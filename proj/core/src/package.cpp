// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/package.hpp"

#include <nlohmann/json.hpp>

#include "dmx/error.hpp"
#include "dmx/merkle.hpp"

namespace dmx {

using nlohmann::json;

std::vector<Word> EncodedPackage::leaves() const {
  std::vector<Word> out;
  out.reserve(leaf_count());
  out.insert(out.end(), enc_chunks.begin(), enc_chunks.end());
  out.insert(out.end(), enc_wires.begin(), enc_wires.end());
  return out;
}

EncodedPackage encode_package(const DataBlob& blob, const PredicateCircuit& circuit,
                              const EncodingKey& key, const EncryptionMask& mask) {
  EvalTranscript transcript = eval_transcript(circuit, blob.chunks);
  EncodedPackage pkg;
  pkg.mask = mask;
  pkg.circuit_digest = circuit.description_digest();
  pkg.enc_chunks.reserve(blob.chunks.size());
  for (std::size_t i = 0; i < blob.chunks.size(); ++i) {
    pkg.enc_chunks.push_back(
        encrypt_chunk_masked(key, i, blob.chunks[i], mask.mask_for(i)));
  }
  pkg.enc_wires.reserve(transcript.wire_values.size());
  for (std::size_t g = 0; g < transcript.wire_values.size(); ++g) {
    pkg.enc_wires.push_back(
        encrypt_chunk(key, blob.chunks.size() + g, transcript.wire_values[g]));
  }
  pkg.root = package_root(pkg);
  return pkg;
}

Digest package_root(const EncodedPackage& pkg) {
  std::vector<Word> all = pkg.leaves();
  return merkle_root_words(all);
}

bool verify_package(const EncodedPackage& pkg, const Digest& agreed_root,
                    const Digest& agreed_circuit_digest,
                    const PredicateCircuit* circuit) {
  if (pkg.enc_chunks.empty() || pkg.enc_wires.empty()) return false;
  if (pkg.circuit_digest != agreed_circuit_digest) return false;
  if (pkg.root != agreed_root) return false;
  if (circuit != nullptr) {
    if (pkg.enc_chunks.size() != circuit->num_inputs) return false;
    if (pkg.enc_wires.size() != circuit->size()) return false;
  }
  return package_root(pkg) == agreed_root;
}

std::pair<DataBlob, bool> decode(const EncodedPackage& pkg, const EncodingKey& key,
                                 const PredicateCircuit& circuit) {
  DataBlob blob;
  blob.chunks.reserve(pkg.enc_chunks.size());
  for (std::size_t i = 0; i < pkg.enc_chunks.size(); ++i) {
    blob.chunks.push_back(
        decrypt_chunk_masked(key, i, pkg.enc_chunks[i], pkg.mask.mask_for(i)));
  }
  bool ok = eval_circuit(circuit, blob.chunks);
  return {std::move(blob), ok};
}

namespace {

std::vector<std::uint64_t> pom_leaf_indices(const PredicateCircuit& circuit,
                                            PomKind kind, std::uint32_t gate) {
  const std::uint64_t n = circuit.num_inputs;
  if (kind == PomKind::BadOutput) {
    return {n + circuit.size() - 1};
  }
  std::vector<std::uint64_t> idx = {n + gate};
  const Gate& g = circuit.gates[gate];
  if (g.op == GateOp::Input) {
    idx.push_back(g.input_index);
  } else {
    for (std::uint32_t a : g.args) idx.push_back(n + a);
  }
  return idx;
}

}  // namespace

std::optional<MisbehaviorProof> generate_pom(const EncodedPackage& pkg,
                                             const EncodingKey& key,
                                             const PredicateCircuit& circuit) {
  circuit.validate();
  if (pkg.enc_chunks.size() != circuit.num_inputs ||
      pkg.enc_wires.size() != circuit.size()) {
    fail(Errc::ArityMismatch, "package shape does not match the circuit");
  }
  const std::size_t n = pkg.enc_chunks.size();

  std::vector<Word> dec_chunks(n);
  for (std::size_t i = 0; i < n; ++i) {
    dec_chunks[i] = decrypt_chunk_masked(key, i, pkg.enc_chunks[i], pkg.mask.mask_for(i));
  }
  std::vector<Word> dec_wires(pkg.enc_wires.size());
  for (std::size_t g = 0; g < pkg.enc_wires.size(); ++g) {
    dec_wires[g] = decrypt_chunk(key, n + g, pkg.enc_wires[g]);
  }

  std::optional<PomKind> kind;
  std::uint32_t bad_gate = 0;
  if (!is_true_word(dec_wires.back())) {
    kind = PomKind::BadOutput;
  } else {
    std::vector<Word> ops;
    for (std::size_t g = 0; g < circuit.size(); ++g) {
      const Gate& gate = circuit.gates[g];
      ops.clear();
      if (gate.op == GateOp::Input) {
        ops.push_back(dec_chunks[gate.input_index]);
      } else {
        for (std::uint32_t a : gate.args) ops.push_back(dec_wires[a]);
      }
      if (dec_wires[g] != apply_gate(gate, ops)) {
        kind = PomKind::BadGate;
        bad_gate = static_cast<std::uint32_t>(g);
        break;
      }
    }
  }
  if (!kind.has_value()) return std::nullopt;

  std::vector<Word> all = pkg.leaves();
  MerkleTree tree = MerkleTree::from_words(all);
  MisbehaviorProof proof;
  proof.kind = *kind;
  proof.gate = bad_gate;
  for (std::uint64_t idx : pom_leaf_indices(circuit, *kind, bad_gate)) {
    proof.leaves.push_back({idx, all[idx], tree.prove(idx)});
  }
  return proof;
}

// --- json ---

std::string EncodedPackage::to_json() const {
  json j;
  json chunks = json::array();
  for (const Word& w : enc_chunks) chunks.push_back(to_hex(w));
  json wires = json::array();
  for (const Word& w : enc_wires) wires.push_back(to_hex(w));
  j["enc_chunks"] = std::move(chunks);
  j["enc_wires"] = std::move(wires);
  j["circuit_digest"] = to_hex(circuit_digest);
  j["root"] = to_hex(root);
  j["header_mask"] = to_hex(mask.header);
  j["row_mask"] = to_hex(mask.rows);
  return j.dump();
}

EncodedPackage EncodedPackage::parse(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Errc::MalformedPackage, "unparseable package");
  }
  try {
    EncodedPackage pkg;
    for (const json& w : j.at("enc_chunks")) {
      pkg.enc_chunks.push_back(word_from_hex(w.get<std::string>()));
    }
    for (const json& w : j.at("enc_wires")) {
      pkg.enc_wires.push_back(word_from_hex(w.get<std::string>()));
    }
    pkg.circuit_digest = digest_from_hex(j.at("circuit_digest").get<std::string>());
    pkg.root = digest_from_hex(j.at("root").get<std::string>());
    pkg.mask.header = word_from_hex(j.at("header_mask").get<std::string>());
    pkg.mask.rows = word_from_hex(j.at("row_mask").get<std::string>());
    return pkg;
  } catch (const json::exception& e) {
    fail(Errc::MalformedPackage, e.what());
  } catch (const std::invalid_argument& e) {
    fail(Errc::MalformedPackage, e.what());
  }
}

Digest data_merkle_id(const DataBlob& blob) {
  return merkle_root_words(blob.chunks);
}

}  // namespace dmx
