#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "olagg/core/table.h"

namespace olagg {

using NodeId = uint32_t;

inline constexpr std::size_t kDefaultChunkCapacity = 4096;

// A bounded batch of rows; the unit of parallel work. Either owns its cells
// or borrows a contiguous row range of a table that outlives it.
class Chunk {
 public:
  Chunk(std::size_t arity, uint64_t sequence_id, NodeId origin_node)
      : arity_(arity), sequence_id_(sequence_id), origin_node_(origin_node) {}

  static Chunk borrow(const Table& table, std::size_t first_row, std::size_t rows, uint64_t sequence_id,
                      NodeId origin_node) {
    Chunk c(table.schema().arity(), sequence_id, origin_node);
    c.borrowed_ = table.cells().data() + first_row * c.arity_;
    c.rows_ = rows;
    return c;
  }

  std::size_t size() const { return rows_; }
  std::size_t arity() const { return arity_; }
  uint64_t sequence_id() const { return sequence_id_; }
  NodeId origin_node() const { return origin_node_; }

  TupleView row(std::size_t i) const { return {data() + i * arity_, arity_}; }

  void reserve(std::size_t rows) { cells_.reserve(rows * arity_); }

  // Owning chunks only.
  void append(TupleView row) {
    cells_.insert(cells_.end(), row.begin(), row.end());
    ++rows_;
  }

 private:
  const Value* data() const { return borrowed_ ? borrowed_ : cells_.data(); }

  std::vector<Value> cells_;
  const Value* borrowed_ = nullptr;
  std::size_t arity_;
  std::size_t rows_ = 0;
  uint64_t sequence_id_;
  NodeId origin_node_;
};

// Cuts a table into consecutive chunks of `capacity` rows; every chunk is full
// except possibly the last. Sequence ids count from zero.
class ChunkStream {
 public:
  // Throws kInvalidArgument when capacity < 1.
  ChunkStream(const Table& table, std::size_t capacity, NodeId node);

  // Emitted chunks borrow rows from the table instead of copying them.
  void set_borrow(bool borrow) { borrow_ = borrow; }

  std::optional<Chunk> next();
  // Rows not yet emitted.
  std::size_t remaining() const { return table_->size() - position_; }

 private:
  const Table* table_;
  std::size_t capacity_;
  NodeId node_;
  std::size_t position_ = 0;
  uint64_t next_sequence_ = 0;
  bool borrow_ = false;
};

std::vector<Chunk> chunk_stream(const Table& table, std::size_t capacity, NodeId node = 0);

}  // namespace olagg
