#pragma once

#include <memory>
#include <vector>

#include "olagg/uda/binding.h"

namespace olagg::uda {

// SUM(f_1..f_k) WHERE p without grouping. One SumState per aggregate.
class SumGla final : public Gla {
 public:
  explicit SumGla(std::shared_ptr<const BoundQuery> query);

  GlaKind kind() const override { return GlaKind::kSum; }
  const BoundQuery& query() const override { return *query_; }

  void init() override;
  void accumulate(TupleView t) override;
  void accumulate_chunk(const Chunk& chunk) override;
  void merge(const Gla& other) override;
  std::vector<GroupValue> terminate() const override;

  void serialize(ByteWriter& w) const override;
  void deserialize(ByteReader& r) override;

  void estimator_terminate(uint64_t local_cardinality) override;
  void estimator_merge(const Gla& other) override;
  void mark_stratum_undefined() override;
  std::vector<GroupEstimate> estimate(const EstimateContext& ctx) const override;

  uint64_t tuples_seen() const override { return seen_; }
  std::size_t group_count() const override { return 1; }

  std::unique_ptr<Gla> clone() const override { return std::make_unique<SumGla>(*this); }
  std::unique_ptr<Gla> fresh() const override { return std::make_unique<SumGla>(query_); }
  bool equals(const Gla& other) const override;

  const std::vector<SumState>& states() const { return states_; }

 private:
  std::shared_ptr<const BoundQuery> query_;
  std::vector<SumState> states_;
  uint64_t seen_ = 0;
};

}  // namespace olagg::uda
