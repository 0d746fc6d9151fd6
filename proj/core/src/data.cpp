// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/data.hpp"

#include <algorithm>

#include "dmx/error.hpp"

namespace dmx {

TableSchema::TableSchema(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) {
    fail(Errc::UnsupportedSpec, "schema needs at least one column");
  }
  std::size_t descriptor_bytes = 1 + 2 * columns_.size();
  if (descriptor_bytes > kRowCountOffset) {
    fail(Errc::UnsupportedSpec, "too many columns for the header chunk");
  }
  std::size_t offset = 0;
  for (const Column& c : columns_) {
    offsets_.push_back(static_cast<std::uint8_t>(offset));
    offset += 1 + c.length;  // tag byte + value
  }
  if (offset > kWordSize) {
    fail(Errc::UnsupportedSpec, "row does not fit a 32-byte chunk");
  }
}

std::optional<std::size_t> TableSchema::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (columns_[k].name == name) return k;
  }
  return std::nullopt;
}

Word TableSchema::header_word(std::uint64_t row_count) const {
  Word w = word_with_trailing_u64(row_count);
  w[0] = static_cast<std::uint8_t>(columns_.size());
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    w[1 + 2 * k] = offsets_[k];
    w[2 + 2 * k] = columns_[k].length;
  }
  return w;
}

Bytes TableSchema::tagged_cell(std::size_t k, ByteSpan value) const {
  if (value.size() > columns_[k].length) {
    fail(Errc::UnsupportedSpec,
         "value too long for column " + columns_[k].name);
  }
  Bytes out(1 + columns_[k].length, 0);
  out[0] = static_cast<std::uint8_t>(k);
  std::copy(value.begin(), value.end(), out.begin() + 1);
  return out;
}

Word TableSchema::row_word(std::span<const Bytes> cells) const {
  if (cells.size() != columns_.size()) {
    fail(Errc::ArityMismatch, "row has wrong cell count");
  }
  Word w{};
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    Bytes cell = tagged_cell(k, span_of(cells[k]));
    std::copy(cell.begin(), cell.end(), w.begin() + offsets_[k]);
  }
  return w;
}

Bytes TableSchema::cell_of(const Word& row, std::size_t k) const {
  const Column& c = columns_[k];
  Bytes out(c.length);
  std::copy(row.begin() + offsets_[k] + 1, row.begin() + offsets_[k] + 1 + c.length,
            out.begin());
  return out;
}

Word TableSchema::row_mask_with_plaintext(
    std::span<const std::string> plaintext_columns) const {
  Word mask;
  mask.fill(0xff);
  for (const std::string& name : plaintext_columns) {
    auto k = index_of(name);
    if (!k.has_value()) {
      fail(Errc::UnsupportedSpec, "unknown column " + name);
    }
    for (std::size_t i = offsets_[*k]; i < offsets_[*k] + 1u + columns_[*k].length; ++i) {
      mask[i] = 0x00;
    }
  }
  return mask;
}

DataBlob Table::to_blob() const {
  DataBlob blob;
  blob.schema = schema;
  blob.chunks.push_back(schema.header_word(rows.size()));
  for (const auto& row : rows) {
    blob.chunks.push_back(schema.row_word(row));
  }
  return blob;
}

TableSchema medical_schema() {
  return TableSchema({{"id", 4}, {"age", 1}, {"class_of_disease", 20}});
}

Table make_medical_table(std::uint64_t rows, SplitMix64& rng) {
  Table t;
  t.schema = medical_schema();
  t.rows.reserve(rows);
  for (std::uint64_t r = 0; r < rows; ++r) {
    Bytes id(4);
    for (std::size_t i = 0; i < 4; ++i) {
      id[i] = static_cast<std::uint8_t>(r >> (8 * (3 - i)));
    }
    Bytes age{static_cast<std::uint8_t>(1 + rng.below(100))};
    std::string_view cls = kDiseaseClasses[rng.below(kDiseaseClasses.size())];
    Bytes cls_bytes(cls.begin(), cls.end());
    t.rows.push_back({std::move(id), std::move(age), std::move(cls_bytes)});
  }
  return t;
}

EncryptionMask medical_mask() {
  EncryptionMask m;
  m.header.fill(0x00);  // schema and row count are public
  std::array<std::string, 2> clear = {"id", "class_of_disease"};
  m.rows = medical_schema().row_mask_with_plaintext(clear);
  return m;
}

DataBlob make_random_blob(std::size_t chunks, SplitMix64& rng) {
  DataBlob blob;
  blob.chunks.reserve(chunks);
  for (std::size_t i = 0; i < chunks; ++i) blob.chunks.push_back(rng.word());
  return blob;
}

}  // namespace dmx
