// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmx/bytes.hpp"
#include "dmx/crypto.hpp"
#include "dmx/rng.hpp"

namespace dmx {

// Tabular layout, one row per 32-byte chunk.
//
// Chunk 0 is the header: byte 0 = column count m, then per column two bytes
// (row offset, value length); bytes 24..31 hold the row count, big-endian.
// In a row chunk, column k occupies [offset_k, offset_k + 1 + len_k): one
// tag byte equal to k, then the value, zero-padded to len_k. The tag byte
// makes a (tag || padded value) pattern column-specific, which is what the
// membership gates match on.

struct Column {
  std::string name;
  std::uint8_t length = 0;

  bool operator==(const Column&) const = default;
};

class TableSchema {
 public:
  TableSchema() = default;
  explicit TableSchema(std::vector<Column> columns);  // UnsupportedSpec if it does not fit

  std::size_t column_count() const { return columns_.size(); }
  const Column& column(std::size_t k) const { return columns_[k]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::uint8_t offset_of(std::size_t k) const { return offsets_[k]; }

  Word header_word(std::uint64_t row_count) const;
  Word row_word(std::span<const Bytes> cells) const;  // one value per column
  Bytes cell_of(const Word& row, std::size_t k) const;

  // Tag byte + zero-padded value: the exact byte pattern of the cell.
  Bytes tagged_cell(std::size_t k, ByteSpan value) const;

  // Mask with 0x00 (clear) over the named columns and 0xff elsewhere.
  Word row_mask_with_plaintext(std::span<const std::string> plaintext_columns) const;

  bool operator==(const TableSchema&) const = default;

  static constexpr std::size_t kRowCountOffset = 24;

 private:
  std::vector<Column> columns_;
  std::vector<std::uint8_t> offsets_;
};

struct DataBlob {
  std::vector<Word> chunks;
  std::optional<TableSchema> schema;
};

struct Table {
  TableSchema schema;
  std::vector<std::vector<Bytes>> rows;

  DataBlob to_blob() const;
};

// The medical-records example: (id, age, class_of_disease) rows where the
// disease class is one of three strings, ids and class column kept in clear
// for the mediator, everything else masked.
inline constexpr std::array<std::string_view, 3> kDiseaseClasses = {
    "Diabetes", "Heart Ailments", "Psychological Issues"};

TableSchema medical_schema();
Table make_medical_table(std::uint64_t rows, SplitMix64& rng);
EncryptionMask medical_mask();

DataBlob make_random_blob(std::size_t chunks, SplitMix64& rng);

}  // namespace dmx
