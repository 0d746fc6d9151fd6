// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmx/bytes.hpp"

namespace dmx {

// Fan-in-2 gates over 32-byte words. A gate's operands are earlier gate ids,
// so a well-formed gate list is a DAG in topological order; the last gate is
// the circuit output and must produce a boolean word.
//
// Semantics:
//   Input(i)        copies input chunk i onto the wire.
//   Const           emits the immediate word.
//   Eq(a,b)         bool: words equal.
//   And/Or(a,b)     bool over operand truthiness (a word is true iff it is
//                   exactly the true word).
//   Not(a)          bool negation of truthiness.
//   Ge64(a,b)       bool: trailing-8-byte big-endian unsigned compare a >= b.
//   Contains(a,b)   bool: b encodes a needle (byte 0 = length L <= 31, then
//                   L bytes); true iff the needle occurs in a. L = 0 matches.
//   HashEq(a[,b])   bool: sha256 of the operand words concatenated equals
//                   the immediate digest. The two-operand form chains a
//                   running digest word with the next data chunk.
enum class GateOp : std::uint8_t {
  Input,
  Const,
  Eq,
  And,
  Or,
  Not,
  Ge64,
  Contains,
  HashEq,
};

std::string_view gate_op_name(GateOp op);
std::optional<GateOp> gate_op_from_name(std::string_view name);

struct Gate {
  GateOp op = GateOp::Const;
  std::uint32_t input_index = 0;       // Input only
  std::vector<std::uint32_t> args;     // operand gate ids (< own id)
  std::optional<Word> imm;             // Const word / HashEq expected digest

  static Gate input(std::uint32_t index);
  static Gate constant(const Word& w);
  static Gate binary(GateOp op, std::uint32_t a, std::uint32_t b);
  static Gate negation(std::uint32_t a);
  static Gate hash_eq(std::uint32_t a, const Word& expected);
  static Gate hash_eq2(std::uint32_t a, std::uint32_t b, const Word& expected);

  bool operator==(const Gate&) const = default;
};

// Pure gate evaluation. `operands` carries one word per operand: the input
// chunk for Input, nothing for Const, operand wire values otherwise.
Word apply_gate(const Gate& gate, std::span<const Word> operands);

// True if the gate's output is a boolean word by construction.
bool gate_produces_bool(const Gate& gate);

struct PredicateCircuit {
  std::vector<Gate> gates;
  std::uint32_t num_inputs = 0;

  std::size_t size() const { return gates.size(); }

  // Throws MalformedCircuit: empty circuit, forward/self reference, bad
  // arity, Input index >= num_inputs, or non-boolean output gate.
  void validate() const;

  // Canonical form: {"gates":[[op,operands...,const_hex?],...],
  // "num_inputs":N}, sorted keys, no whitespace. The description digest is
  // the sha256 of this text.
  std::string canonical_json() const;
  Digest description_digest() const;
  static PredicateCircuit parse(std::string_view json_text);  // MalformedCircuit

  bool operator==(const PredicateCircuit&) const = default;
};

struct EvalTranscript {
  std::vector<Word> wire_values;  // one per gate, in gate order
};

// Evaluate the output gate; ArityMismatch if |input| != num_inputs.
bool eval_circuit(const PredicateCircuit& c, std::span<const Word> input);

// All wire values, satisfying wire[g] = apply_gate(g, operand wires).
EvalTranscript eval_transcript(const PredicateCircuit& c, std::span<const Word> input);

// Needle descriptor for Contains: byte 0 = length, bytes 1..len = needle.
Word needle_word(ByteSpan needle);  // UnsupportedSpec if len > 31

}  // namespace dmx
