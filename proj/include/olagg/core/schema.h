#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olagg/core/value.h"

namespace olagg {

struct Column {
  std::string name;
  Kind kind;

  friend bool operator==(const Column&, const Column&) = default;
};

class Schema {
 public:
  Schema() = default;
  // Throws kInvalidArgument on duplicate column names.
  explicit Schema(std::vector<Column> columns);

  // "name:kind,name:kind,..." (the CSV header line).
  static Schema parse(std::string_view header);
  std::string to_header() const;

  std::size_t arity() const { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_[i]; }
  const std::vector<Column>& columns() const { return columns_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  // Throws kTypeMismatch naming the unknown column.
  std::size_t require(std::string_view name) const;

  // Columns of this schema followed by those of `other` (join concatenation).
  Schema concat(const Schema& other) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Column> columns_;
};

}  // namespace olagg
