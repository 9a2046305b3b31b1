#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "olagg/core/schema.h"
#include "olagg/core/value.h"

namespace olagg {

// Read-only view of one row. Valid as long as the owning Table/Chunk/Tuple.
using TupleView = std::span<const Value>;

// An owning row.
class Tuple {
 public:
  Tuple() = default;
  Tuple(std::initializer_list<Value> values) : values_(values) {}
  explicit Tuple(std::vector<Value> values) : values_(std::move(values)) {}
  explicit Tuple(TupleView view) : values_(view.begin(), view.end()) {}

  std::size_t arity() const { return values_.size(); }
  const Value& operator[](std::size_t i) const { return values_[i]; }
  TupleView view() const { return values_; }
  operator TupleView() const { return values_; }  // NOLINT: implicit by intent

  friend bool operator==(const Tuple&, const Tuple&) = default;

 private:
  std::vector<Value> values_;
};

// Throws kTypeMismatch unless `row` matches `schema` in arity and kinds.
void check_row(const Schema& schema, TupleView row);

// Row-major in-memory relation; one per partition.
class Table {
 public:
  Table() = default;
  explicit Table(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return rows_; }
  bool empty() const { return rows_ == 0; }

  TupleView row(std::size_t i) const {
    return {cells_.data() + i * schema_.arity(), schema_.arity()};
  }

  void append(TupleView row);  // validated
  void append_unchecked(TupleView row) {
    cells_.insert(cells_.end(), row.begin(), row.end());
    ++rows_;
  }
  void reserve(std::size_t rows) { cells_.reserve(rows * schema_.arity()); }

  const std::vector<Value>& cells() const { return cells_; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  Schema schema_;
  std::vector<Value> cells_;
  std::size_t rows_ = 0;
};

}  // namespace olagg
