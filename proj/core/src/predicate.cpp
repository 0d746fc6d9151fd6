// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/predicate.hpp"

#include <map>

#include "dmx/crypto.hpp"
#include "dmx/error.hpp"

namespace dmx {

SpecNode SpecNode::hash_equals(std::vector<Digest> chain) {
  SpecNode n;
  n.kind = Kind::HashEquals;
  n.chain = std::move(chain);
  return n;
}

SpecNode SpecNode::all_chunks_contain(Bytes needle) {
  SpecNode n;
  n.kind = Kind::AllChunksContain;
  n.needle = std::move(needle);
  return n;
}

SpecNode SpecNode::field_membership(std::string column, std::vector<Bytes> allowed) {
  SpecNode n;
  n.kind = Kind::FieldMembership;
  n.column = std::move(column);
  n.allowed = std::move(allowed);
  return n;
}

SpecNode SpecNode::row_count_at_least(std::uint64_t min_rows) {
  SpecNode n;
  n.kind = Kind::RowCountAtLeast;
  n.min_rows = min_rows;
  return n;
}

SpecNode SpecNode::all_of(std::vector<SpecNode> parts) {
  SpecNode n;
  n.kind = Kind::And;
  n.children = std::move(parts);
  return n;
}

SpecNode SpecNode::any_of(std::vector<SpecNode> parts) {
  SpecNode n;
  n.kind = Kind::Or;
  n.children = std::move(parts);
  return n;
}

SpecNode SpecNode::negation(SpecNode part) {
  SpecNode n;
  n.kind = Kind::Not;
  n.children.push_back(std::move(part));
  return n;
}

namespace {

class CircuitBuilder {
 public:
  explicit CircuitBuilder(const PredicateSpec& spec) : spec_(spec) {
    circuit_.num_inputs = spec.num_chunks;
  }

  PredicateCircuit take(std::uint32_t output) {
    // The output must be the last gate; pad with an idempotent AND if a
    // cached gate ended up as the root.
    if (output + 1 != circuit_.gates.size()) {
      output = push(Gate::binary(GateOp::And, output, output));
    }
    circuit_.validate();
    return std::move(circuit_);
  }

  std::uint32_t push(Gate g) {
    circuit_.gates.push_back(std::move(g));
    return static_cast<std::uint32_t>(circuit_.gates.size() - 1);
  }

  std::uint32_t input(std::uint32_t i) { return push(Gate::input(i)); }

  std::uint32_t cached_const(const Word& w) {
    auto it = const_cache_.find(w);
    if (it != const_cache_.end()) return it->second;
    std::uint32_t id = push(Gate::constant(w));
    const_cache_.emplace(w, id);
    return id;
  }

  std::uint32_t fold(GateOp op, const std::vector<std::uint32_t>& parts) {
    std::uint32_t acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      acc = push(Gate::binary(op, acc, parts[i]));
    }
    return acc;
  }

  std::uint32_t emit(const SpecNode& node) {
    switch (node.kind) {
      case SpecNode::Kind::HashEquals: return emit_hash_equals(node);
      case SpecNode::Kind::AllChunksContain: return emit_all_contain(node);
      case SpecNode::Kind::FieldMembership: return emit_membership(node);
      case SpecNode::Kind::RowCountAtLeast: return emit_row_count(node);
      case SpecNode::Kind::And:
      case SpecNode::Kind::Or: {
        if (node.children.empty()) {
          fail(Errc::UnsupportedSpec, "empty and/or composition");
        }
        std::vector<std::uint32_t> parts;
        for (const SpecNode& c : node.children) parts.push_back(emit(c));
        return fold(node.kind == SpecNode::Kind::And ? GateOp::And : GateOp::Or,
                    parts);
      }
      case SpecNode::Kind::Not: {
        if (node.children.size() != 1) {
          fail(Errc::UnsupportedSpec, "not takes exactly one child");
        }
        return push(Gate::negation(emit(node.children.front())));
      }
    }
    fail(Errc::UnsupportedSpec, "unknown spec node");
  }

 private:
  std::uint32_t emit_hash_equals(const SpecNode& node) {
    if (node.chain.size() != spec_.num_chunks || node.chain.empty()) {
      fail(Errc::UnsupportedSpec, "hash chain length must equal chunk count");
    }
    std::vector<std::uint32_t> steps;
    steps.push_back(push(Gate::hash_eq(input(0), to_word(node.chain[0]))));
    for (std::uint32_t i = 1; i < node.chain.size(); ++i) {
      std::uint32_t prev = cached_const(to_word(node.chain[i - 1]));
      steps.push_back(
          push(Gate::hash_eq2(prev, input(i), to_word(node.chain[i]))));
    }
    return fold(GateOp::And, steps);
  }

  std::uint32_t emit_all_contain(const SpecNode& node) {
    if (spec_.num_chunks == 0) {
      fail(Errc::UnsupportedSpec, "predicate over zero chunks");
    }
    std::uint32_t needle = cached_const(needle_word(span_of(node.needle)));
    std::vector<std::uint32_t> per_chunk;
    for (std::uint32_t i = 0; i < spec_.num_chunks; ++i) {
      per_chunk.push_back(
          push(Gate::binary(GateOp::Contains, input(i), needle)));
    }
    return fold(GateOp::And, per_chunk);
  }

  std::uint32_t emit_membership(const SpecNode& node) {
    if (!spec_.schema.has_value()) {
      fail(Errc::UnsupportedSpec, "field membership needs a table schema");
    }
    if (node.allowed.empty()) {
      fail(Errc::EmptySet, "membership set for " + node.column + " is empty");
    }
    auto col = spec_.schema->index_of(node.column);
    if (!col.has_value()) {
      fail(Errc::UnsupportedSpec, "unknown column " + node.column);
    }
    std::vector<std::uint32_t> needles;
    for (const Bytes& v : node.allowed) {
      Bytes cell = spec_.schema->tagged_cell(*col, span_of(v));
      needles.push_back(cached_const(needle_word(span_of(cell))));
    }
    if (spec_.num_chunks <= 1) {
      return push(Gate::constant(true_word()));  // no rows: vacuously true
    }
    std::vector<std::uint32_t> per_row;
    for (std::uint32_t i = 1; i < spec_.num_chunks; ++i) {
      std::uint32_t row = input(i);
      std::vector<std::uint32_t> hits;
      for (std::uint32_t n : needles) {
        hits.push_back(push(Gate::binary(GateOp::Contains, row, n)));
      }
      per_row.push_back(fold(GateOp::Or, hits));
    }
    return fold(GateOp::And, per_row);
  }

  std::uint32_t emit_row_count(const SpecNode& node) {
    if (node.min_rows == 0) {
      return push(Gate::constant(true_word()));
    }
    if (!spec_.schema.has_value()) {
      fail(Errc::UnsupportedSpec, "row count bound needs a table schema");
    }
    std::uint32_t bound = cached_const(word_with_trailing_u64(node.min_rows));
    return push(Gate::binary(GateOp::Ge64, input(0), bound));
  }

  const PredicateSpec& spec_;
  PredicateCircuit circuit_;
  std::map<Word, std::uint32_t> const_cache_;
};

}  // namespace

PredicateCircuit compile_spec(const PredicateSpec& spec) {
  if (spec.num_chunks == 0) {
    fail(Errc::UnsupportedSpec, "predicate over zero chunks");
  }
  CircuitBuilder b(spec);
  return b.take(b.emit(spec.root));
}

std::vector<Digest> hash_chain(std::span<const Word> chunks) {
  std::vector<Digest> chain;
  chain.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    chain.push_back(i == 0 ? sha256(span_of(chunks[0]))
                           : sha256_cat({span_of(chain[i - 1]), span_of(chunks[i])}));
  }
  return chain;
}

PredicateSpec hash_equals_spec(const DataBlob& blob) {
  PredicateSpec spec;
  spec.num_chunks = static_cast<std::uint32_t>(blob.chunks.size());
  spec.schema = blob.schema;
  spec.root = SpecNode::hash_equals(hash_chain(blob.chunks));
  return spec;
}

PredicateSpec all_chunks_contain_spec(std::uint32_t num_chunks, Bytes needle) {
  PredicateSpec spec;
  spec.num_chunks = num_chunks;
  spec.root = SpecNode::all_chunks_contain(std::move(needle));
  return spec;
}

PredicateSpec medical_phi_spec(const TableSchema& schema, std::uint32_t num_chunks,
                               std::uint64_t min_rows) {
  std::vector<Bytes> allowed;
  for (std::string_view cls : kDiseaseClasses) {
    allowed.emplace_back(cls.begin(), cls.end());
  }
  PredicateSpec spec;
  spec.num_chunks = num_chunks;
  spec.schema = schema;
  spec.root = SpecNode::all_of(
      {SpecNode::field_membership("class_of_disease", std::move(allowed)),
       SpecNode::row_count_at_least(min_rows)});
  return spec;
}

namespace {

bool range_clear(const Word& mask, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    if (mask[i] != 0x00) return false;
  }
  return true;
}

bool mask_fully_clear(const EncryptionMask& mask) {
  return range_clear(mask.header, 0, kWordSize) && range_clear(mask.rows, 0, kWordSize);
}

// tri-state: nullopt = not decidable from the visible bytes
std::optional<bool> check_node(const PredicateSpec& spec, const SpecNode& node,
                               std::span<const Word> chunks,
                               const EncryptionMask& mask) {
  switch (node.kind) {
    case SpecNode::Kind::RowCountAtLeast: {
      if (node.min_rows == 0) return true;
      if (!range_clear(mask.header, TableSchema::kRowCountOffset, kWordSize)) {
        return std::nullopt;
      }
      return trailing_u64(chunks[0]) >= node.min_rows;
    }
    case SpecNode::Kind::FieldMembership: {
      if (!spec.schema.has_value()) return std::nullopt;
      auto col = spec.schema->index_of(node.column);
      if (!col.has_value()) return std::nullopt;
      std::size_t begin = spec.schema->offset_of(*col);
      std::size_t end = begin + 1 + spec.schema->column(*col).length;
      if (!range_clear(mask.rows, begin, end)) return std::nullopt;
      for (std::size_t i = 1; i < chunks.size(); ++i) {
        bool hit = false;
        for (const Bytes& v : node.allowed) {
          Bytes cell = spec.schema->tagged_cell(*col, span_of(v));
          if (std::equal(cell.begin(), cell.end(), chunks[i].begin() + begin)) {
            hit = true;
            break;
          }
        }
        if (!hit) return false;
      }
      return true;
    }
    case SpecNode::Kind::AllChunksContain:
    case SpecNode::Kind::HashEquals: {
      if (!mask_fully_clear(mask)) return std::nullopt;
      PredicateSpec sub = spec;
      sub.root = node;
      return eval_circuit(compile_spec(sub), chunks);
    }
    case SpecNode::Kind::And: {
      bool all_true = true;
      for (const SpecNode& c : node.children) {
        auto r = check_node(spec, c, chunks, mask);
        if (r.has_value() && !*r) return false;
        if (!r.has_value()) all_true = false;
      }
      return all_true ? std::optional<bool>(true) : std::nullopt;
    }
    case SpecNode::Kind::Or: {
      bool any_unknown = false;
      for (const SpecNode& c : node.children) {
        auto r = check_node(spec, c, chunks, mask);
        if (r.has_value() && *r) return true;
        if (!r.has_value()) any_unknown = true;
      }
      return any_unknown ? std::nullopt : std::optional<bool>(false);
    }
    case SpecNode::Kind::Not: {
      auto r = check_node(spec, node.children.front(), chunks, mask);
      if (!r.has_value()) return std::nullopt;
      return !*r;
    }
  }
  return std::nullopt;
}

}  // namespace

bool partial_phi_check(const PredicateSpec& spec, std::span<const Word> enc_chunks,
                       const EncryptionMask& mask) {
  if (enc_chunks.size() != spec.num_chunks) return false;
  auto r = check_node(spec, spec.root, enc_chunks, mask);
  return r.value_or(true);
}

}  // namespace dmx
