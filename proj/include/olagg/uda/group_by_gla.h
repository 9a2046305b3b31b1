#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "olagg/uda/binding.h"

namespace olagg::uda {

// Hash of per-group sum states plus the shared sample size. Groups appear
// only through qualifying tuples; rejected tuples still count in
// total_seen, which is |S| for every group's estimator.
class GroupByGla final : public Gla {
 public:
  using GroupMap = std::unordered_map<GroupKey, std::vector<SumState>, GroupKeyHash>;

  explicit GroupByGla(std::shared_ptr<const BoundQuery> query);

  GlaKind kind() const override { return GlaKind::kGroupBy; }
  const BoundQuery& query() const override { return *query_; }

  void init() override;
  void accumulate(TupleView t) override {
    ++total_seen_;
    accumulate_unit(t);
  }
  void merge(const Gla& other) override;
  std::vector<GroupValue> terminate() const override;

  void serialize(ByteWriter& w) const override;
  void deserialize(ByteReader& r) override;

  void estimator_terminate(uint64_t local_cardinality) override;
  void estimator_merge(const Gla& other) override;
  void mark_stratum_undefined() override;
  std::vector<GroupEstimate> estimate(const EstimateContext& ctx) const override;

  uint64_t tuples_seen() const override { return total_seen_; }
  std::size_t group_count() const override { return groups_.size(); }

  std::unique_ptr<Gla> clone() const override { return std::make_unique<GroupByGla>(*this); }
  std::unique_ptr<Gla> fresh() const override { return std::make_unique<GroupByGla>(query_); }
  bool equals(const Gla& other) const override;

  // Applies p and the grouping to one row without counting a sampling unit.
  // The join state feeds every join result through here.
  void accumulate_unit(TupleView row);
  void add_seen(uint64_t n) { total_seen_ += n; }

  const GroupMap& groups() const { return groups_; }
  StratumStatus stratum_status() const { return strata_; }

  // Body without the header, shared with the join state's format.
  void write_body(ByteWriter& w) const;
  void read_body(ByteReader& r);

 private:
  std::vector<SumState>& group_for(TupleView row);

  std::shared_ptr<const BoundQuery> query_;
  GroupMap groups_;
  uint64_t total_seen_ = 0;
  StratumStatus strata_ = StratumStatus::kPending;
  GroupKey scratch_;
};

}  // namespace olagg::uda
