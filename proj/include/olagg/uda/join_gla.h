#pragma once

#include <memory>
#include <vector>

#include "olagg/uda/group_by_gla.h"

namespace olagg::uda {

// Fact tuple joined with a replicated dimension, then grouped. The fact tuple
// is the sampling unit: it counts once in total_seen however many dimension
// rows it matches, and f over it is the sum over its join results.
class JoinGla final : public Gla {
 public:
  explicit JoinGla(std::shared_ptr<const BoundQuery> query);
  JoinGla(const JoinGla& other);

  GlaKind kind() const override { return GlaKind::kJoin; }
  const BoundQuery& query() const override { return *query_; }

  void init() override { inner_.init(); }
  void accumulate(TupleView t) override;
  void merge(const Gla& other) override;
  std::vector<GroupValue> terminate() const override { return inner_.terminate(); }

  void serialize(ByteWriter& w) const override;
  void deserialize(ByteReader& r) override;

  void estimator_terminate(uint64_t local_cardinality) override { inner_.estimator_terminate(local_cardinality); }
  void estimator_merge(const Gla& other) override;
  void mark_stratum_undefined() override { inner_.mark_stratum_undefined(); }
  std::vector<GroupEstimate> estimate(const EstimateContext& ctx) const override { return inner_.estimate(ctx); }

  uint64_t tuples_seen() const override { return inner_.tuples_seen(); }
  std::size_t group_count() const override { return inner_.group_count(); }

  std::unique_ptr<Gla> clone() const override { return std::make_unique<JoinGla>(*this); }
  std::unique_ptr<Gla> fresh() const override { return std::make_unique<JoinGla>(query_); }
  bool equals(const Gla& other) const override;

  const GroupByGla& inner() const { return inner_; }

 private:
  std::shared_ptr<const BoundQuery> query_;
  GroupByGla inner_;
  std::vector<Value> joined_;  // scratch row: fact columns then dimension columns
};

}  // namespace olagg::uda
