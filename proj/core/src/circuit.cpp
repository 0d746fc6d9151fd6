// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/circuit.hpp"

#include <nlohmann/json.hpp>

#include "dmx/crypto.hpp"
#include "dmx/error.hpp"

namespace dmx {

using nlohmann::json;

std::string_view gate_op_name(GateOp op) {
  switch (op) {
    case GateOp::Input: return "input";
    case GateOp::Const: return "const";
    case GateOp::Eq: return "eq";
    case GateOp::And: return "and";
    case GateOp::Or: return "or";
    case GateOp::Not: return "not";
    case GateOp::Ge64: return "ge64";
    case GateOp::Contains: return "contains";
    case GateOp::HashEq: return "hasheq";
  }
  return "?";
}

std::optional<GateOp> gate_op_from_name(std::string_view name) {
  for (GateOp op : {GateOp::Input, GateOp::Const, GateOp::Eq, GateOp::And,
                    GateOp::Or, GateOp::Not, GateOp::Ge64, GateOp::Contains,
                    GateOp::HashEq}) {
    if (gate_op_name(op) == name) return op;
  }
  return std::nullopt;
}

Gate Gate::input(std::uint32_t index) {
  Gate g;
  g.op = GateOp::Input;
  g.input_index = index;
  return g;
}

Gate Gate::constant(const Word& w) {
  Gate g;
  g.op = GateOp::Const;
  g.imm = w;
  return g;
}

Gate Gate::binary(GateOp op, std::uint32_t a, std::uint32_t b) {
  Gate g;
  g.op = op;
  g.args = {a, b};
  return g;
}

Gate Gate::negation(std::uint32_t a) {
  Gate g;
  g.op = GateOp::Not;
  g.args = {a};
  return g;
}

Gate Gate::hash_eq(std::uint32_t a, const Word& expected) {
  Gate g;
  g.op = GateOp::HashEq;
  g.args = {a};
  g.imm = expected;
  return g;
}

Gate Gate::hash_eq2(std::uint32_t a, std::uint32_t b, const Word& expected) {
  Gate g;
  g.op = GateOp::HashEq;
  g.args = {a, b};
  g.imm = expected;
  return g;
}

namespace {

bool word_contains(const Word& hay, const Word& needle_desc) {
  std::size_t len = needle_desc[0];
  if (len == 0) return true;
  if (len > kWordSize - 1) return false;
  for (std::size_t pos = 0; pos + len <= kWordSize; ++pos) {
    bool match = true;
    for (std::size_t i = 0; i < len; ++i) {
      if (hay[pos + i] != needle_desc[1 + i]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

Word apply_gate(const Gate& gate, std::span<const Word> operands) {
  switch (gate.op) {
    case GateOp::Input:
      return operands[0];
    case GateOp::Const:
      return *gate.imm;
    case GateOp::Eq:
      return bool_word(operands[0] == operands[1]);
    case GateOp::And:
      return bool_word(is_true_word(operands[0]) && is_true_word(operands[1]));
    case GateOp::Or:
      return bool_word(is_true_word(operands[0]) || is_true_word(operands[1]));
    case GateOp::Not:
      return bool_word(!is_true_word(operands[0]));
    case GateOp::Ge64:
      return bool_word(trailing_u64(operands[0]) >= trailing_u64(operands[1]));
    case GateOp::Contains:
      return bool_word(word_contains(operands[0], operands[1]));
    case GateOp::HashEq: {
      Digest h = operands.size() == 2
                     ? sha256_cat({span_of(operands[0]), span_of(operands[1])})
                     : sha256(span_of(operands[0]));
      return bool_word(to_word(h) == *gate.imm);
    }
  }
  return false_word();
}

bool gate_produces_bool(const Gate& gate) {
  switch (gate.op) {
    case GateOp::Input:
      return false;
    case GateOp::Const:
      return gate.imm.has_value() &&
             (*gate.imm == true_word() || *gate.imm == false_word());
    default:
      return true;
  }
}

void PredicateCircuit::validate() const {
  if (gates.empty()) {
    fail(Errc::MalformedCircuit, "circuit has no gates");
  }
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    std::size_t want_args = 0;
    bool want_imm = false;
    switch (gate.op) {
      case GateOp::Input:
        if (gate.input_index >= num_inputs) {
          fail(Errc::MalformedCircuit,
               "gate " + std::to_string(g) + " reads input " +
                   std::to_string(gate.input_index) + " of " +
                   std::to_string(num_inputs));
        }
        break;
      case GateOp::Const:
        want_imm = true;
        break;
      case GateOp::Not:
        want_args = 1;
        break;
      case GateOp::HashEq:
        want_args = gate.args.size() == 2 ? 2 : 1;
        want_imm = true;
        break;
      default:
        want_args = 2;
        break;
    }
    if (gate.args.size() != want_args) {
      fail(Errc::MalformedCircuit,
           "gate " + std::to_string(g) + " has wrong operand count");
    }
    if (want_imm && !gate.imm.has_value()) {
      fail(Errc::MalformedCircuit,
           "gate " + std::to_string(g) + " is missing its constant");
    }
    for (std::uint32_t a : gate.args) {
      if (a >= g) {
        fail(Errc::MalformedCircuit,
             "gate " + std::to_string(g) + " references gate " +
                 std::to_string(a) + " (forward or self reference)");
      }
    }
  }
  if (!gate_produces_bool(gates.back())) {
    fail(Errc::MalformedCircuit, "output gate does not produce a boolean");
  }
}

namespace {

std::vector<Word> eval_wires(const PredicateCircuit& c, std::span<const Word> input) {
  c.validate();
  if (input.size() != c.num_inputs) {
    fail(Errc::ArityMismatch, "circuit expects " + std::to_string(c.num_inputs) +
                                  " chunks, got " + std::to_string(input.size()));
  }
  std::vector<Word> wires;
  wires.reserve(c.gates.size());
  std::vector<Word> ops;
  for (const Gate& gate : c.gates) {
    ops.clear();
    if (gate.op == GateOp::Input) {
      ops.push_back(input[gate.input_index]);
    } else {
      for (std::uint32_t a : gate.args) ops.push_back(wires[a]);
    }
    wires.push_back(apply_gate(gate, ops));
  }
  return wires;
}

}  // namespace

bool eval_circuit(const PredicateCircuit& c, std::span<const Word> input) {
  return is_true_word(eval_wires(c, input).back());
}

EvalTranscript eval_transcript(const PredicateCircuit& c, std::span<const Word> input) {
  return EvalTranscript{eval_wires(c, input)};
}

std::string PredicateCircuit::canonical_json() const {
  json gates_json = json::array();
  for (const Gate& gate : gates) {
    json g = json::array();
    g.push_back(std::string(gate_op_name(gate.op)));
    if (gate.op == GateOp::Input) {
      g.push_back(gate.input_index);
    } else {
      for (std::uint32_t a : gate.args) g.push_back(a);
      if (gate.imm.has_value()) g.push_back(to_hex(*gate.imm));
    }
    gates_json.push_back(std::move(g));
  }
  json j;
  j["gates"] = std::move(gates_json);
  j["num_inputs"] = num_inputs;
  return j.dump();
}

Digest PredicateCircuit::description_digest() const {
  std::string text = canonical_json();
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
}

PredicateCircuit PredicateCircuit::parse(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("gates") ||
      !j.contains("num_inputs") || !j["gates"].is_array() ||
      !j["num_inputs"].is_number_unsigned()) {
    fail(Errc::MalformedCircuit, "unparseable circuit description");
  }
  PredicateCircuit c;
  c.num_inputs = j["num_inputs"].get<std::uint32_t>();
  for (const json& g : j["gates"]) {
    if (!g.is_array() || g.empty() || !g[0].is_string()) {
      fail(Errc::MalformedCircuit, "gate entry is not [op, ...]");
    }
    auto op = gate_op_from_name(g[0].get<std::string>());
    if (!op.has_value()) {
      fail(Errc::MalformedCircuit, "unknown gate op " + g[0].get<std::string>());
    }
    Gate gate;
    gate.op = *op;
    std::size_t i = 1;
    if (*op == GateOp::Input) {
      if (g.size() != 2 || !g[1].is_number_unsigned()) {
        fail(Errc::MalformedCircuit, "input gate needs one index");
      }
      gate.input_index = g[1].get<std::uint32_t>();
      c.gates.push_back(std::move(gate));
      continue;
    }
    while (i < g.size() && g[i].is_number_unsigned()) {
      gate.args.push_back(g[i].get<std::uint32_t>());
      ++i;
    }
    if (i < g.size()) {
      if (!g[i].is_string()) {
        fail(Errc::MalformedCircuit, "trailing gate field must be hex");
      }
      try {
        gate.imm = word_from_hex(g[i].get<std::string>());
      } catch (const std::invalid_argument& e) {
        fail(Errc::MalformedCircuit, e.what());
      }
      ++i;
    }
    if (i != g.size()) {
      fail(Errc::MalformedCircuit, "unexpected gate fields");
    }
    c.gates.push_back(std::move(gate));
  }
  c.validate();
  return c;
}

Word needle_word(ByteSpan needle) {
  if (needle.size() > kWordSize - 1) {
    fail(Errc::UnsupportedSpec,
         "needle of " + std::to_string(needle.size()) + " bytes does not fit a word");
  }
  Word w{};
  w[0] = static_cast<std::uint8_t>(needle.size());
  for (std::size_t i = 0; i < needle.size(); ++i) w[1 + i] = needle[i];
  return w;
}

}  // namespace dmx
