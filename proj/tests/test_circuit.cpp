// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/circuit.hpp"

#include <gtest/gtest.h>

#include "dmx/crypto.hpp"
#include "dmx/rng.hpp"
#include "gen.hpp"
#include "test_util.hpp"

namespace dmx {
namespace {

using dmx_test::bytes_of;
using dmx_test::random_circuit;
using dmx_test::random_input;

PredicateCircuit eq_self_circuit() {
  PredicateCircuit c;
  c.num_inputs = 1;
  c.gates.push_back(Gate::input(0));
  c.gates.push_back(Gate::binary(GateOp::Eq, 0, 0));
  return c;
}

TEST(Circuit, EqOnIdenticalWordsIsTrue) {
  PredicateCircuit c = eq_self_circuit();
  std::vector<Word> input = {SplitMix64(3).word()};
  EXPECT_TRUE(eval_circuit(c, input));
}

TEST(Circuit, EqDistinguishesWords) {
  PredicateCircuit c;
  c.num_inputs = 2;
  c.gates.push_back(Gate::input(0));
  c.gates.push_back(Gate::input(1));
  c.gates.push_back(Gate::binary(GateOp::Eq, 0, 1));
  SplitMix64 rng(5);
  Word a = rng.word();
  Word b = rng.word();
  EXPECT_FALSE(eval_circuit(c, std::vector<Word>{a, b}));
  EXPECT_TRUE(eval_circuit(c, std::vector<Word>{a, a}));
}

TEST(Circuit, TruthTableOps) {
  auto run = [](GateOp op, bool a, bool b) {
    PredicateCircuit c;
    c.num_inputs = 0;
    c.gates.push_back(Gate::constant(bool_word(a)));
    c.gates.push_back(Gate::constant(bool_word(b)));
    c.gates.push_back(Gate::binary(op, 0, 1));
    return eval_circuit(c, {});
  };
  EXPECT_TRUE(run(GateOp::And, true, true));
  EXPECT_FALSE(run(GateOp::And, true, false));
  EXPECT_FALSE(run(GateOp::And, false, false));
  EXPECT_TRUE(run(GateOp::Or, false, true));
  EXPECT_FALSE(run(GateOp::Or, false, false));
}

TEST(Circuit, NotConstTrueTranscript) {
  PredicateCircuit c;
  c.num_inputs = 0;
  c.gates.push_back(Gate::constant(true_word()));
  c.gates.push_back(Gate::negation(0));
  EvalTranscript t = eval_transcript(c, {});
  ASSERT_EQ(t.wire_values.size(), 2u);
  EXPECT_EQ(t.wire_values[0], true_word());
  EXPECT_EQ(t.wire_values[1], false_word());
  EXPECT_FALSE(eval_circuit(c, {}));
}

TEST(Circuit, SingleConstTrueTranscript) {
  PredicateCircuit c;
  c.num_inputs = 0;
  c.gates.push_back(Gate::constant(true_word()));
  EvalTranscript t = eval_transcript(c, {});
  ASSERT_EQ(t.wire_values.size(), 1u);
  EXPECT_EQ(t.wire_values[0], true_word());
}

TEST(Circuit, NonBooleanWordsAreNotTruthy) {
  // Truthiness is exact equality with the true word.
  PredicateCircuit c;
  c.num_inputs = 1;
  c.gates.push_back(Gate::input(0));
  c.gates.push_back(Gate::negation(0));
  Word w{};
  w[0] = 1;  // leading byte, not the boolean encoding
  EXPECT_TRUE(eval_circuit(c, std::vector<Word>{w}));
}

TEST(Circuit, Ge64ComparesTrailingBytes) {
  auto ge = [](std::uint64_t a, std::uint64_t b) {
    PredicateCircuit c;
    c.num_inputs = 0;
    c.gates.push_back(Gate::constant(word_with_trailing_u64(a)));
    c.gates.push_back(Gate::constant(word_with_trailing_u64(b)));
    c.gates.push_back(Gate::binary(GateOp::Ge64, 0, 1));
    return eval_circuit(c, {});
  };
  EXPECT_TRUE(ge(10, 10));
  EXPECT_TRUE(ge(11, 10));
  EXPECT_FALSE(ge(9, 10));
  EXPECT_TRUE(ge(0xffffffffffffffffULL, 1));
  EXPECT_TRUE(ge(0, 0));
}

TEST(Circuit, Ge64IgnoresLeadingBytes) {
  Word a = word_with_trailing_u64(5);
  a[0] = 0xff;  // big leading bytes must not affect the compare
  PredicateCircuit c;
  c.num_inputs = 0;
  c.gates.push_back(Gate::constant(a));
  c.gates.push_back(Gate::constant(word_with_trailing_u64(6)));
  c.gates.push_back(Gate::binary(GateOp::Ge64, 0, 1));
  EXPECT_FALSE(eval_circuit(c, {}));
}

TEST(Circuit, ContainsFindsNeedleAnywhere) {
  auto contains = [](const Word& hay, ByteSpan needle) {
    PredicateCircuit c;
    c.num_inputs = 0;
    c.gates.push_back(Gate::constant(hay));
    c.gates.push_back(Gate::constant(needle_word(needle)));
    c.gates.push_back(Gate::binary(GateOp::Contains, 0, 1));
    return eval_circuit(c, {});
  };
  Word hay{};
  const std::string text = "the quick brown fox";
  std::copy(text.begin(), text.end(), hay.begin());

  EXPECT_TRUE(contains(hay, bytes_of("quick")));
  EXPECT_TRUE(contains(hay, bytes_of("the")));  // at offset 0
  EXPECT_TRUE(contains(hay, bytes_of("")));     // empty needle always matches
  EXPECT_FALSE(contains(hay, bytes_of("lazy")));
  // Needle ending exactly at the last byte.
  Word tail{};
  tail[30] = 'o';
  tail[31] = 'k';
  EXPECT_TRUE(contains(tail, bytes_of("ok")));
}

TEST(Circuit, NeedleWordRejectsOversize) {
  Bytes long_needle(32, 0x41);
  EXPECT_DMX_ERROR(needle_word(span_of(long_needle)), Errc::UnsupportedSpec);
  Bytes max_needle(31, 0x41);
  EXPECT_EQ(needle_word(span_of(max_needle))[0], 31);
}

TEST(Circuit, HashEqUnaryAndChained) {
  SplitMix64 rng(7);
  Word data = rng.word();
  Word prev = rng.word();

  PredicateCircuit c;
  c.num_inputs = 1;
  c.gates.push_back(Gate::input(0));
  c.gates.push_back(Gate::hash_eq(0, to_word(sha256(span_of(data)))));
  EXPECT_TRUE(eval_circuit(c, std::vector<Word>{data}));

  PredicateCircuit chained;
  chained.num_inputs = 1;
  chained.gates.push_back(Gate::constant(prev));
  chained.gates.push_back(Gate::input(0));
  chained.gates.push_back(
      Gate::hash_eq2(0, 1, to_word(sha256_cat({span_of(prev), span_of(data)}))));
  EXPECT_TRUE(eval_circuit(chained, std::vector<Word>{data}));
  Word other = rng.word();
  EXPECT_FALSE(eval_circuit(chained, std::vector<Word>{other}));
}

TEST(Circuit, ArityMismatchRejected) {
  PredicateCircuit c = eq_self_circuit();
  std::vector<Word> none;
  EXPECT_DMX_ERROR(eval_circuit(c, none), Errc::ArityMismatch);
  std::vector<Word> two = {Word{}, Word{}};
  EXPECT_DMX_ERROR(eval_circuit(c, two), Errc::ArityMismatch);
}

TEST(Circuit, MalformedCircuitsRejected) {
  std::vector<Word> one = {Word{}};

  PredicateCircuit empty;
  empty.num_inputs = 1;
  EXPECT_DMX_ERROR(eval_circuit(empty, one), Errc::MalformedCircuit);

  PredicateCircuit forward;
  forward.num_inputs = 1;
  forward.gates.push_back(Gate::binary(GateOp::Eq, 0, 1));  // self/forward ref
  EXPECT_DMX_ERROR(eval_circuit(forward, one), Errc::MalformedCircuit);

  PredicateCircuit bad_input;
  bad_input.num_inputs = 1;
  bad_input.gates.push_back(Gate::input(3));
  bad_input.gates.push_back(Gate::binary(GateOp::Eq, 0, 0));
  EXPECT_DMX_ERROR(eval_circuit(bad_input, one), Errc::MalformedCircuit);

  PredicateCircuit non_bool_output;
  non_bool_output.num_inputs = 1;
  non_bool_output.gates.push_back(Gate::input(0));
  EXPECT_DMX_ERROR(eval_circuit(non_bool_output, one), Errc::MalformedCircuit);

  PredicateCircuit non_bool_const;
  non_bool_const.num_inputs = 0;
  Word w{};
  w[5] = 9;
  non_bool_const.gates.push_back(Gate::constant(w));
  EXPECT_DMX_ERROR(eval_circuit(non_bool_const, {}), Errc::MalformedCircuit);
}

TEST(Circuit, CanonicalJsonIsStable) {
  PredicateCircuit c;
  c.num_inputs = 2;
  c.gates.push_back(Gate::input(0));
  c.gates.push_back(Gate::input(1));
  c.gates.push_back(Gate::binary(GateOp::Eq, 0, 1));
  c.gates.push_back(Gate::hash_eq(2, bool_word(true)));
  c.gates.push_back(Gate::binary(GateOp::And, 2, 3));

  const std::string expected =
      R"({"gates":[["input",0],["input",1],["eq",0,1],["hasheq",2,)"
      R"("0000000000000000000000000000000000000000000000000000000000000001"],)"
      R"(["and",2,3]],"num_inputs":2})";
  EXPECT_EQ(c.canonical_json(), expected);
  EXPECT_EQ(c.description_digest(),
            sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(expected.data()),
                            expected.size())));
}

TEST(Circuit, SerializeParseRoundTripIsByteIdentical) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    PredicateCircuit c =
        random_circuit(rng, 1 + static_cast<std::uint32_t>(rng.below(8)), 40);
    std::string text = c.canonical_json();
    PredicateCircuit parsed = PredicateCircuit::parse(text);
    EXPECT_EQ(parsed, c);
    EXPECT_EQ(parsed.canonical_json(), text);
    EXPECT_EQ(parsed.description_digest(), c.description_digest());
  }
}

TEST(Circuit, ParseRejectsGarbage) {
  EXPECT_DMX_ERROR(PredicateCircuit::parse("not json"), Errc::MalformedCircuit);
  EXPECT_DMX_ERROR(PredicateCircuit::parse(R"({"gates":[],"num_inputs":0})"),
                   Errc::MalformedCircuit);
  EXPECT_DMX_ERROR(
      PredicateCircuit::parse(R"({"gates":[["bogus",0]],"num_inputs":1})"),
      Errc::MalformedCircuit);
  EXPECT_DMX_ERROR(
      PredicateCircuit::parse(R"({"gates":[["eq",0,1]],"num_inputs":1})"),
      Errc::MalformedCircuit);
}

// Transcript soundness: the last wire agrees with eval_circuit and every
// gate satisfies local consistency, over random circuits and inputs.
TEST(Circuit, TranscriptConsistencyProperty) {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(16));
    PredicateCircuit c = random_circuit(rng, n, 64);
    std::vector<Word> input = random_input(rng, n);
    EvalTranscript t = eval_transcript(c, input);
    ASSERT_EQ(t.wire_values.size(), c.size());
    EXPECT_EQ(is_true_word(t.wire_values.back()), eval_circuit(c, input));
    for (std::size_t g = 0; g < c.size(); ++g) {
      const Gate& gate = c.gates[g];
      std::vector<Word> ops;
      if (gate.op == GateOp::Input) {
        ops.push_back(input[gate.input_index]);
      } else {
        for (std::uint32_t a : gate.args) ops.push_back(t.wire_values[a]);
      }
      ASSERT_EQ(t.wire_values[g], apply_gate(gate, ops)) << "gate " << g;
    }
  }
}

TEST(Circuit, EvalIsPureAndRepeatable) {
  SplitMix64 rng(17);
  PredicateCircuit c = random_circuit(rng, 4, 32);
  std::vector<Word> input = random_input(rng, 4);
  EvalTranscript first = eval_transcript(c, input);
  EvalTranscript second = eval_transcript(c, input);
  EXPECT_EQ(first.wire_values, second.wire_values);
}

}  // namespace
}  // namespace dmx
