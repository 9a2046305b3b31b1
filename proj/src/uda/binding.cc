#include "olagg/uda/binding.h"

#include "olagg/core/dataset.h"
#include "olagg/core/error.h"
#include "olagg/uda/group_by_gla.h"
#include "olagg/uda/join_gla.h"
#include "olagg/uda/sum_gla.h"

namespace olagg::uda {

bool key_less(const GroupKey& a, const GroupKey& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = a[i].compare(b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

std::string format_key(const GroupKey& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += '|';
    out += key[i].to_string();
  }
  return out;
}

void write_header(ByteWriter& w, GlaKind kind) {
  w.u8(static_cast<uint8_t>(kind));
  w.u8(kStateVersion);
}

void read_header(ByteReader& r, GlaKind expected) {
  uint8_t tag = r.u8();
  if (tag != static_cast<uint8_t>(expected)) {
    raise(ErrorCode::kMalformedBytes, "state tag " + std::to_string(tag) + ", expected " +
                                          std::to_string(static_cast<int>(expected)));
  }
  uint8_t version = r.u8();
  if (version != kStateVersion) {
    raise(ErrorCode::kVersionMismatch, "state version " + std::to_string(version) + ", this build reads " +
                                           std::to_string(kStateVersion));
  }
}

std::unique_ptr<Gla> merge(const Gla& a, const Gla& b) {
  auto out = a.clone();
  out->merge(b);
  return out;
}

std::unique_ptr<Gla> estimator_merge(const Gla& a, const Gla& b) {
  auto out = a.clone();
  out->estimator_merge(b);
  return out;
}

std::vector<std::byte> serialize(const Gla& gla) {
  ByteWriter w;
  gla.serialize(w);
  return w.take();
}

std::unique_ptr<Gla> deserialize(const Gla& prototype, std::span<const std::byte> bytes) {
  auto out = prototype.fresh();
  ByteReader r(bytes);
  out->deserialize(r);
  r.expect_end();
  return out;
}

std::shared_ptr<const JoinTable> JoinTable::build(std::shared_ptr<const Table> rows, std::string_view key_column,
                                                  std::size_t cap) {
  if (rows->size() > cap) {
    raise(ErrorCode::kCapacityExceeded, "dimension has " + std::to_string(rows->size()) +
                                            " rows; the cap is " + std::to_string(cap));
  }
  auto table = std::make_shared<JoinTable>();
  table->key_column_ = rows->schema().require(key_column);
  table->buckets_.reserve(rows->size());
  for (std::size_t i = 0; i < rows->size(); ++i) {
    table->buckets_[rows->row(i)[table->key_column_]].push_back(static_cast<uint32_t>(i));
  }
  table->rows_ = std::move(rows);
  return table;
}

std::shared_ptr<const BoundQuery> bind_query(const QueryPlan& plan, const Schema& fact_schema,
                                             std::shared_ptr<const Table> dimension, std::size_t dimension_cap) {
  validate_confidence(plan.confidence);
  if (plan.aggregates.empty()) raise(ErrorCode::kInvalidArgument, "plan has no aggregate expression");

  auto q = std::make_shared<BoundQuery>();
  q->plan = plan;
  q->fact_schema = fact_schema;
  q->row_schema = fact_schema;

  if (plan.dimension) {
    const DimensionSpec& spec = *plan.dimension;
    if (!dimension) {
      if (spec.path.empty()) raise(ErrorCode::kInvalidArgument, "join plan without a dimension table");
      dimension = std::make_shared<const Table>(read_csv(spec.path));
    }
    q->join = JoinTable::build(dimension, spec.dim_key, dimension_cap);
    q->fact_key = static_cast<uint32_t>(fact_schema.require(spec.fact_key));
    Kind fk = fact_schema.column(q->fact_key).kind;
    Kind dk = dimension->schema().column(q->join->key_column()).kind;
    if (fk != dk) {
      raise(ErrorCode::kTypeMismatch, "join keys " + spec.fact_key + ":" + kind_name(fk) + " and " + spec.dim_key +
                                          ":" + kind_name(dk) + " differ in kind");
    }
    q->row_schema = fact_schema.concat(dimension->schema());
  }

  for (const Expr& e : plan.aggregates) q->aggregates.push_back(BoundExpr::bind(e, q->row_schema));
  q->predicate = BoundPred::bind(plan.predicate, q->row_schema);
  for (const std::string& g : plan.group_by) {
    q->group_columns.push_back(static_cast<uint32_t>(q->row_schema.require(g)));
  }
  return q;
}

std::unique_ptr<Gla> make_gla(std::shared_ptr<const BoundQuery> query) {
  if (query->join) return std::make_unique<JoinGla>(std::move(query));
  if (query->grouped()) return std::make_unique<GroupByGla>(std::move(query));
  return std::make_unique<SumGla>(std::move(query));
}

}  // namespace olagg::uda
