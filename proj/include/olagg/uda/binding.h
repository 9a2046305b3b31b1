#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "olagg/core/plan.h"
#include "olagg/core/table.h"
#include "olagg/uda/gla.h"

namespace olagg::uda {

inline constexpr std::size_t kDefaultDimensionCap = 1'000'000;

// Replicated dimension table hashed on its join column. Immutable once built.
class JoinTable {
 public:
  // Throws kCapacityExceeded when the table has more than `cap` rows and
  // kTypeMismatch for an unknown key column.
  static std::shared_ptr<const JoinTable> build(std::shared_ptr<const Table> rows, std::string_view key_column,
                                                std::size_t cap = kDefaultDimensionCap);

  const Table& rows() const { return *rows_; }
  std::size_t key_column() const { return key_column_; }
  std::size_t bucket_count() const { return buckets_.size(); }

  // Row indices whose key equals `key`; nullptr on a miss.
  const std::vector<uint32_t>* probe(const Value& key) const {
    auto it = buckets_.find(key);
    return it == buckets_.end() ? nullptr : &it->second;
  }

 private:
  std::shared_ptr<const Table> rows_;
  std::size_t key_column_ = 0;
  std::unordered_map<Value, std::vector<uint32_t>> buckets_;
};

// A plan resolved against the fact schema. Shared read-only by every state of
// one query.
struct BoundQuery {
  QueryPlan plan;
  Schema fact_schema;
  Schema row_schema;  // fact columns, then dimension columns for joins
  std::vector<BoundExpr> aggregates;
  BoundPred predicate;
  std::vector<uint32_t> group_columns;  // indexes into row_schema
  std::shared_ptr<const JoinTable> join;
  uint32_t fact_key = 0;

  bool grouped() const { return !group_columns.empty(); }
};

// Type-checks the plan. For joins the dimension is `dimension` when given,
// else read from plan.dimension->path. Throws validation errors
// (kTypeMismatch, kInvalidArgument, kCapacityExceeded) or kIo.
std::shared_ptr<const BoundQuery> bind_query(const QueryPlan& plan, const Schema& fact_schema,
                                             std::shared_ptr<const Table> dimension = nullptr,
                                             std::size_t dimension_cap = kDefaultDimensionCap);

// Flat plans get a SumGla, grouped plans a GroupByGla, joins a JoinGla.
std::unique_ptr<Gla> make_gla(std::shared_ptr<const BoundQuery> query);

}  // namespace olagg::uda
