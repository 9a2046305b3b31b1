#include "olagg/core/table.h"

#include <string>

#include "olagg/core/error.h"

namespace olagg {

void check_row(const Schema& schema, TupleView row) {
  if (row.size() != schema.arity()) {
    raise(ErrorCode::kTypeMismatch, "row arity " + std::to_string(row.size()) + " does not match schema arity " +
                                        std::to_string(schema.arity()));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].kind() != schema.column(i).kind) {
      raise(ErrorCode::kTypeMismatch, "column '" + schema.column(i).name + "' expects " +
                                          kind_name(schema.column(i).kind) + ", got " + kind_name(row[i].kind()));
    }
  }
}

void Table::append(TupleView row) {
  check_row(schema_, row);
  append_unchecked(row);
}

}  // namespace olagg
