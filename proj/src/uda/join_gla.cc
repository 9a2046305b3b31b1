#include "olagg/uda/join_gla.h"

#include <algorithm>

#include "olagg/core/error.h"

namespace olagg::uda {

JoinGla::JoinGla(std::shared_ptr<const BoundQuery> query)
    : query_(std::move(query)), inner_(query_), joined_(query_->row_schema.arity()) {
  if (!query_->join) raise(ErrorCode::kInvalidArgument, "join state needs a dimension table");
}

JoinGla::JoinGla(const JoinGla& other)
    : Gla(other), query_(other.query_), inner_(other.inner_), joined_(other.joined_.size()) {}

void JoinGla::accumulate(TupleView t) {
  inner_.add_seen(1);
  const auto* bucket = query_->join->probe(t[query_->fact_key]);
  if (!bucket) return;
  std::copy(t.begin(), t.end(), joined_.begin());
  const Table& dim = query_->join->rows();
  for (uint32_t row : *bucket) {
    TupleView d = dim.row(row);
    std::copy(d.begin(), d.end(), joined_.begin() + static_cast<std::ptrdiff_t>(t.size()));
    inner_.accumulate_unit(joined_);
  }
}

void JoinGla::merge(const Gla& other) { inner_.merge(dynamic_cast<const JoinGla&>(other).inner_); }

void JoinGla::estimator_merge(const Gla& other) {
  inner_.estimator_merge(dynamic_cast<const JoinGla&>(other).inner_);
}

void JoinGla::serialize(ByteWriter& w) const {
  write_header(w, GlaKind::kJoin);
  inner_.write_body(w);
}

void JoinGla::deserialize(ByteReader& r) {
  read_header(r, GlaKind::kJoin);
  inner_.read_body(r);
}

bool JoinGla::equals(const Gla& other) const {
  const auto* o = dynamic_cast<const JoinGla*>(&other);
  return o && inner_.equals(o->inner_);
}

}  // namespace olagg::uda
