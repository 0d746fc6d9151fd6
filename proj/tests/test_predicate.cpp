// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/predicate.hpp"

#include <gtest/gtest.h>

#include "dmx/crypto.hpp"
#include "gen.hpp"
#include "test_util.hpp"

namespace dmx {
namespace {

using dmx_test::bytes_of;
using dmx_test::random_input;
using dmx_test::to_bytes;

// ---- reference oracle: a direct recoding of each template's definition,
// independent of the circuit compiler. ----

bool ref_contains(const Word& hay, ByteSpan needle) {
  if (needle.empty()) return true;
  if (needle.size() > kWordSize) return false;
  for (std::size_t pos = 0; pos + needle.size() <= kWordSize; ++pos) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + pos)) return true;
  }
  return false;
}

bool ref_eval(const PredicateSpec& spec, const SpecNode& node,
              std::span<const Word> chunks) {
  switch (node.kind) {
    case SpecNode::Kind::HashEquals: {
      if (sha256(span_of(chunks[0])) != node.chain[0]) return false;
      for (std::size_t i = 1; i < node.chain.size(); ++i) {
        if (sha256_cat({span_of(node.chain[i - 1]), span_of(chunks[i])}) !=
            node.chain[i]) {
          return false;
        }
      }
      return true;
    }
    case SpecNode::Kind::AllChunksContain: {
      for (const Word& c : chunks) {
        if (!ref_contains(c, span_of(node.needle))) return false;
      }
      return true;
    }
    case SpecNode::Kind::FieldMembership: {
      std::size_t col = spec.schema->index_of(node.column).value();
      for (std::size_t i = 1; i < chunks.size(); ++i) {
        bool hit = false;
        for (const Bytes& v : node.allowed) {
          Bytes cell = spec.schema->tagged_cell(col, span_of(v));
          if (ref_contains(chunks[i], span_of(cell))) {
            hit = true;
            break;
          }
        }
        if (!hit) return false;
      }
      return true;
    }
    case SpecNode::Kind::RowCountAtLeast:
      return node.min_rows == 0 || trailing_u64(chunks[0]) >= node.min_rows;
    case SpecNode::Kind::And:
      for (const SpecNode& c : node.children) {
        if (!ref_eval(spec, c, chunks)) return false;
      }
      return true;
    case SpecNode::Kind::Or:
      for (const SpecNode& c : node.children) {
        if (ref_eval(spec, c, chunks)) return true;
      }
      return false;
    case SpecNode::Kind::Not:
      return !ref_eval(spec, node.children.front(), chunks);
  }
  return false;
}

bool ref_eval(const PredicateSpec& spec, std::span<const Word> chunks) {
  return ref_eval(spec, spec.root, chunks);
}

void expect_matches_reference(const PredicateSpec& spec, int random_trials,
                              std::uint64_t seed) {
  PredicateCircuit circuit = compile_spec(spec);
  SplitMix64 rng(seed);
  for (int t = 0; t < random_trials; ++t) {
    std::vector<Word> input = random_input(rng, spec.num_chunks);
    ASSERT_EQ(eval_circuit(circuit, input), ref_eval(spec, input));
  }
}

// ---- hash equality ----

TEST(CompileSpec, HashEqualsAcceptsTheFileAndOnlyTheFile) {
  SplitMix64 rng(3);
  for (std::size_t chunks : {1u, 2u, 5u, 16u}) {
    DataBlob blob = make_random_blob(chunks, rng);
    PredicateSpec spec = hash_equals_spec(blob);
    PredicateCircuit circuit = compile_spec(spec);
    EXPECT_TRUE(eval_circuit(circuit, blob.chunks));

    DataBlob tampered = blob;
    tampered.chunks[rng.below(chunks)][rng.below(kWordSize)] ^= 0x01;
    EXPECT_FALSE(eval_circuit(circuit, tampered.chunks));
  }
}

TEST(CompileSpec, HashEqualsMatchesReferenceOnRandomInputs) {
  SplitMix64 rng(5);
  DataBlob blob = make_random_blob(4, rng);
  expect_matches_reference(hash_equals_spec(blob), 1000, 7);
}

TEST(CompileSpec, HashChainDefinition) {
  SplitMix64 rng(9);
  std::vector<Word> chunks = random_input(rng, 3);
  std::vector<Digest> chain = hash_chain(chunks);
  ASSERT_EQ(chain.size(), 3u);
  EXPECT_EQ(chain[0], sha256(span_of(chunks[0])));
  EXPECT_EQ(chain[1], sha256_cat({span_of(chain[0]), span_of(chunks[1])}));
  EXPECT_EQ(chain[2], sha256_cat({span_of(chain[1]), span_of(chunks[2])}));
}

TEST(CompileSpec, HashEqualsChainLengthMustMatchArity) {
  PredicateSpec spec;
  spec.num_chunks = 3;
  spec.root = SpecNode::hash_equals({Digest{}});
  EXPECT_DMX_ERROR(compile_spec(spec), Errc::UnsupportedSpec);
}

// ---- all chunks contain ----

TEST(CompileSpec, AllChunksContainSpotsTheMissingChunk) {
  const std::string s = "needle";
  SplitMix64 rng(11);
  std::vector<Word> chunks = random_input(rng, 4);
  for (Word& c : chunks) {
    std::copy(s.begin(), s.end(), c.begin() + 10);
  }
  PredicateSpec spec = all_chunks_contain_spec(4, to_bytes(s));
  PredicateCircuit circuit = compile_spec(spec);
  EXPECT_TRUE(eval_circuit(circuit, chunks));

  // Chunk 2 loses the bitstring.
  chunks[2][10] ^= 0xff;
  EXPECT_FALSE(eval_circuit(circuit, chunks));
  EXPECT_EQ(ref_eval(spec, chunks), false);
}

TEST(CompileSpec, AllChunksContainMatchesReference) {
  expect_matches_reference(all_chunks_contain_spec(3, to_bytes("ab")), 1000, 13);
  // Empty needle: vacuously true everywhere.
  PredicateSpec empty_needle = all_chunks_contain_spec(2, {});
  PredicateCircuit c = compile_spec(empty_needle);
  SplitMix64 rng(15);
  std::vector<Word> input = random_input(rng, 2);
  EXPECT_TRUE(eval_circuit(c, input));
}

// ---- tabular layout ----

TEST(Tabular, HeaderAndRowLayoutRoundTrip) {
  TableSchema schema = medical_schema();
  EXPECT_EQ(schema.column_count(), 3u);
  EXPECT_EQ(schema.index_of("class_of_disease"), 2u);
  EXPECT_EQ(schema.offset_of(0), 0);
  EXPECT_EQ(schema.offset_of(1), 5);  // id takes 1 tag + 4 value bytes
  EXPECT_EQ(schema.offset_of(2), 7);

  Word header = schema.header_word(10'000);
  EXPECT_EQ(header[0], 3);  // column count
  EXPECT_EQ(trailing_u64(header), 10'000u);

  std::vector<Bytes> cells = {to_bytes("\x01\x02\x03\x04"), to_bytes("\x2a"),
                              to_bytes("Diabetes")};
  Word row = schema.row_word(cells);
  EXPECT_EQ(row[0], 0);     // tag of column 0
  EXPECT_EQ(row[5], 1);     // tag of column 1
  EXPECT_EQ(row[6], 0x2a);  // age value
  EXPECT_EQ(row[7], 2);     // tag of column 2
  EXPECT_EQ(schema.cell_of(row, 1), to_bytes("\x2a"));
  Bytes cls = schema.cell_of(row, 2);
  EXPECT_EQ(std::string(cls.begin(), cls.begin() + 8), "Diabetes");
}

TEST(Tabular, SchemaLimitsEnforced) {
  EXPECT_DMX_ERROR(TableSchema({{"a", 40}}), Errc::UnsupportedSpec);
  EXPECT_DMX_ERROR(TableSchema(std::vector<Column>(12, {"c", 0})),
                   Errc::UnsupportedSpec);
  TableSchema schema = medical_schema();
  Bytes too_long(21, 'x');
  EXPECT_DMX_ERROR(schema.tagged_cell(2, span_of(too_long)), Errc::UnsupportedSpec);
}

TEST(Tabular, MedicalMaskKeepsIdAndClassClear) {
  EncryptionMask mask = medical_mask();
  for (std::size_t i = 0; i < kWordSize; ++i) EXPECT_EQ(mask.header[i], 0x00);
  TableSchema schema = medical_schema();
  // id column [0,5) and class column [7,28) clear; age [5,7) and padding masked.
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(mask.rows[i], 0x00);
  EXPECT_EQ(mask.rows[5], 0xff);
  EXPECT_EQ(mask.rows[6], 0xff);
  for (std::size_t i = 7; i < 28; ++i) EXPECT_EQ(mask.rows[i], 0x00);
  for (std::size_t i = 28; i < kWordSize; ++i) EXPECT_EQ(mask.rows[i], 0xff);
  (void)schema;
}

// ---- the paper's buyer predicate ----

TEST(CompileSpec, MedicalPredicateAcceptsCompliantTable) {
  SplitMix64 rng(17);
  Table table = make_medical_table(120, rng);
  DataBlob blob = table.to_blob();
  ASSERT_EQ(blob.chunks.size(), 121u);

  PredicateSpec spec = medical_phi_spec(table.schema,
                                        static_cast<std::uint32_t>(blob.chunks.size()),
                                        100);
  PredicateCircuit circuit = compile_spec(spec);
  EXPECT_TRUE(eval_circuit(circuit, blob.chunks));
  EXPECT_TRUE(ref_eval(spec, blob.chunks));
}

TEST(CompileSpec, MedicalPredicateRejectsForeignDiseaseClass) {
  SplitMix64 rng(19);
  Table table = make_medical_table(30, rng);
  table.rows[17][2] = to_bytes("Oncology");
  DataBlob blob = table.to_blob();
  PredicateSpec spec = medical_phi_spec(table.schema,
                                        static_cast<std::uint32_t>(blob.chunks.size()),
                                        10);
  EXPECT_FALSE(eval_circuit(compile_spec(spec), blob.chunks));
  EXPECT_FALSE(ref_eval(spec, blob.chunks));
}

TEST(CompileSpec, MedicalPredicateEnforcesRowBound) {
  SplitMix64 rng(21);
  Table table = make_medical_table(40, rng);
  DataBlob blob = table.to_blob();
  std::uint32_t n = static_cast<std::uint32_t>(blob.chunks.size());

  EXPECT_TRUE(eval_circuit(compile_spec(medical_phi_spec(table.schema, n, 40)),
                           blob.chunks));
  EXPECT_FALSE(eval_circuit(compile_spec(medical_phi_spec(table.schema, n, 41)),
                            blob.chunks));
}

TEST(CompileSpec, MedicalPredicateMatchesReferenceOnRandomInputs) {
  SplitMix64 rng(23);
  Table table = make_medical_table(6, rng);
  PredicateSpec spec = medical_phi_spec(table.schema, 7, 5);
  expect_matches_reference(spec, 1000, 25);
}

TEST(CompileSpec, TenThousandRowPaperBound) {
  SplitMix64 rng(27);
  Table table = make_medical_table(10'000, rng);
  DataBlob blob = table.to_blob();
  PredicateSpec spec = medical_phi_spec(table.schema,
                                        static_cast<std::uint32_t>(blob.chunks.size()),
                                        10'000);
  EXPECT_TRUE(eval_circuit(compile_spec(spec), blob.chunks));
}

TEST(CompileSpec, RowCountZeroIsConstantTrue) {
  PredicateSpec spec;
  spec.num_chunks = 2;
  spec.root = SpecNode::row_count_at_least(0);
  PredicateCircuit circuit = compile_spec(spec);
  EXPECT_EQ(circuit.size(), 1u);
  EXPECT_EQ(circuit.gates[0].op, GateOp::Const);
  SplitMix64 rng(29);
  EXPECT_TRUE(eval_circuit(circuit, random_input(rng, 2)));
}

// ---- composition and error paths ----

TEST(CompileSpec, CompositionMatchesReference) {
  SplitMix64 rng(31);
  DataBlob blob = make_random_blob(3, rng);
  PredicateSpec spec;
  spec.num_chunks = 3;
  spec.root = SpecNode::any_of(
      {SpecNode::hash_equals(hash_chain(blob.chunks)),
       SpecNode::negation(SpecNode::all_chunks_contain(to_bytes("zz")))});
  expect_matches_reference(spec, 1000, 33);
  EXPECT_TRUE(eval_circuit(compile_spec(spec), blob.chunks));
}

TEST(CompileSpec, ErrorPaths) {
  TableSchema schema = medical_schema();

  PredicateSpec empty_set;
  empty_set.num_chunks = 2;
  empty_set.schema = schema;
  empty_set.root = SpecNode::field_membership("class_of_disease", {});
  EXPECT_DMX_ERROR(compile_spec(empty_set), Errc::EmptySet);

  PredicateSpec no_schema;
  no_schema.num_chunks = 2;
  no_schema.root = SpecNode::field_membership("class_of_disease", {to_bytes("x")});
  EXPECT_DMX_ERROR(compile_spec(no_schema), Errc::UnsupportedSpec);

  PredicateSpec bad_column;
  bad_column.num_chunks = 2;
  bad_column.schema = schema;
  bad_column.root = SpecNode::field_membership("drug", {to_bytes("x")});
  EXPECT_DMX_ERROR(compile_spec(bad_column), Errc::UnsupportedSpec);

  PredicateSpec empty_and;
  empty_and.num_chunks = 1;
  empty_and.root = SpecNode::all_of({});
  EXPECT_DMX_ERROR(compile_spec(empty_and), Errc::UnsupportedSpec);

  PredicateSpec zero_chunks;
  zero_chunks.num_chunks = 0;
  zero_chunks.root = SpecNode::row_count_at_least(0);
  EXPECT_DMX_ERROR(compile_spec(zero_chunks), Errc::UnsupportedSpec);
}

TEST(CompileSpec, CompiledDigestIsDeterministic) {
  SplitMix64 rng(35);
  Table table = make_medical_table(8, rng);
  PredicateSpec spec = medical_phi_spec(table.schema, 9, 8);
  EXPECT_EQ(compile_spec(spec).description_digest(),
            compile_spec(spec).description_digest());
}

// ---- mediator-side partial check ----

TEST(PartialPhiCheck, SeesThroughTheMedicalMask) {
  SplitMix64 rng(37);
  Table table = make_medical_table(25, rng);
  DataBlob blob = table.to_blob();
  std::uint32_t n = static_cast<std::uint32_t>(blob.chunks.size());
  PredicateSpec spec = medical_phi_spec(table.schema, n, 20);
  EncryptionMask mask = medical_mask();
  EncodingKey key{rng.word()};

  std::vector<Word> enc(blob.chunks.size());
  for (std::size_t i = 0; i < blob.chunks.size(); ++i) {
    enc[i] = encrypt_chunk_masked(key, i, blob.chunks[i], mask.mask_for(i));
  }
  EXPECT_TRUE(partial_phi_check(spec, enc, mask));

  // A bad class value sits in a plaintext column: the mediator can see it.
  Table bad = table;
  bad.rows[3][2] = to_bytes("Cardiology");
  DataBlob bad_blob = bad.to_blob();
  std::vector<Word> bad_enc(bad_blob.chunks.size());
  for (std::size_t i = 0; i < bad_blob.chunks.size(); ++i) {
    bad_enc[i] = encrypt_chunk_masked(key, i, bad_blob.chunks[i], mask.mask_for(i));
  }
  EXPECT_FALSE(partial_phi_check(spec, bad_enc, mask));

  // Row-count shortfall is visible in the plaintext header.
  PredicateSpec strict = medical_phi_spec(table.schema, n, 26);
  EXPECT_FALSE(partial_phi_check(strict, enc, mask));
}

TEST(PartialPhiCheck, FullEncryptionIsInconclusive) {
  SplitMix64 rng(39);
  DataBlob blob = make_random_blob(4, rng);
  PredicateSpec spec = hash_equals_spec(blob);
  EncodingKey key{rng.word()};
  std::vector<Word> enc(blob.chunks.size());
  for (std::size_t i = 0; i < blob.chunks.size(); ++i) {
    enc[i] = encrypt_chunk(key, i, blob.chunks[i]);
  }
  // Nothing is decidable over ciphertext, so the check must not reject.
  EXPECT_TRUE(partial_phi_check(spec, enc, EncryptionMask::full()));
  // Arity mismatch is always a definite violation.
  std::vector<Word> short_pkg(enc.begin(), enc.end() - 1);
  EXPECT_FALSE(partial_phi_check(spec, short_pkg, EncryptionMask::full()));
}

}  // namespace
}  // namespace dmx
