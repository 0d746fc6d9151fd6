// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmx/circuit.hpp"
#include "dmx/data.hpp"

namespace dmx {

// Buyer-facing predicate templates. compile_spec lowers a template tree to
// a PredicateCircuit whose evaluation matches the template's definition on
// every input of the declared arity.
struct SpecNode {
  enum class Kind {
    HashEquals,       // the chunk-digest chain of the data ends in chain.back()
    AllChunksContain, // every chunk contains the needle bytes
    FieldMembership,  // every row's column value is in the allowed set
    RowCountAtLeast,  // header row count >= min_rows
    And,
    Or,
    Not,
  };

  Kind kind = Kind::And;
  std::vector<Digest> chain;        // HashEquals: r_0..r_{n-1}, r_i = sha256(r_{i-1} || c_i)
  Bytes needle;                     // AllChunksContain
  std::string column;               // FieldMembership
  std::vector<Bytes> allowed;       // FieldMembership
  std::uint64_t min_rows = 0;       // RowCountAtLeast
  std::vector<SpecNode> children;   // And/Or/Not

  static SpecNode hash_equals(std::vector<Digest> chain);
  static SpecNode all_chunks_contain(Bytes needle);
  static SpecNode field_membership(std::string column, std::vector<Bytes> allowed);
  static SpecNode row_count_at_least(std::uint64_t min_rows);
  static SpecNode all_of(std::vector<SpecNode> parts);
  static SpecNode any_of(std::vector<SpecNode> parts);
  static SpecNode negation(SpecNode part);
};

struct PredicateSpec {
  std::uint32_t num_chunks = 0;
  std::optional<TableSchema> schema;  // required by FieldMembership
  SpecNode root;
};

// Errors: UnsupportedSpec (missing schema, unknown column, oversized needle,
// empty composition, chain length mismatch), EmptySet (empty allowed set).
PredicateCircuit compile_spec(const PredicateSpec& spec);

// The chunk-digest chain: r_0 = sha256(c_0), r_i = sha256(r_{i-1} || c_i).
// H(F) of a chunked file is the last element.
std::vector<Digest> hash_chain(std::span<const Word> chunks);

PredicateSpec hash_equals_spec(const DataBlob& blob);
PredicateSpec all_chunks_contain_spec(std::uint32_t num_chunks, Bytes needle);

// The paper's buyer predicate for the medical table: class_of_disease in
// the three allowed classes and at least min_rows rows.
PredicateSpec medical_phi_spec(const TableSchema& schema, std::uint32_t num_chunks,
                               std::uint64_t min_rows);

// What a mediator can check on a selectively encrypted package: evaluates
// the template over plaintext-visible bytes only. Returns false on a
// definite violation, true when satisfied or not decidable from ciphertext.
bool partial_phi_check(const PredicateSpec& spec, std::span<const Word> enc_chunks,
                       const EncryptionMask& mask);

}  // namespace dmx
