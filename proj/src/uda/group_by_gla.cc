#include "olagg/uda/group_by_gla.h"

#include <algorithm>

#include "olagg/core/error.h"

namespace olagg::uda {

GroupByGla::GroupByGla(std::shared_ptr<const BoundQuery> query) : query_(std::move(query)) { init(); }

void GroupByGla::init() {
  groups_.clear();
  total_seen_ = 0;
  strata_ = StratumStatus::kPending;
  // An ungrouped plan (the join with no GROUP BY) always reports its one group.
  if (!query_->grouped()) groups_.emplace(GroupKey{}, std::vector<SumState>(query_->aggregates.size()));
}

std::vector<SumState>& GroupByGla::group_for(TupleView row) {
  scratch_.clear();
  for (uint32_t c : query_->group_columns) scratch_.push_back(row[c]);
  auto it = groups_.find(scratch_);
  if (it == groups_.end()) {
    it = groups_.emplace(scratch_, std::vector<SumState>(query_->aggregates.size())).first;
  }
  return it->second;
}

void GroupByGla::accumulate_unit(TupleView row) {
  if (!query_->predicate.eval(row)) return;
  auto& states = group_for(row);
  for (std::size_t i = 0; i < states.size(); ++i) states[i].moments.add_qualifying(query_->aggregates[i].eval(row));
}

void GroupByGla::merge(const Gla& other) {
  const auto& o = dynamic_cast<const GroupByGla&>(other);
  for (const auto& [key, states] : o.groups_) {
    auto [it, inserted] = groups_.try_emplace(key, states);
    if (inserted) continue;
    for (std::size_t i = 0; i < states.size(); ++i) it->second[i] = sum_merge(it->second[i], states[i]);
  }
  total_seen_ += o.total_seen_;
}

std::vector<GroupValue> GroupByGla::terminate() const {
  std::vector<GroupValue> out;
  out.reserve(groups_.size());
  for (const auto& [key, states] : groups_) {
    GroupValue g{key, {}};
    for (const auto& s : states) g.values.push_back(s.moments.sum);
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const GroupValue& a, const GroupValue& b) { return key_less(a.key, b.key); });
  return out;
}

void GroupByGla::write_body(ByteWriter& w) const {
  w.u64(total_seen_);
  w.u8(static_cast<uint8_t>(strata_));
  w.u32(static_cast<uint32_t>(query_->aggregates.size()));
  w.u32(static_cast<uint32_t>(query_->group_columns.size()));
  w.u64(groups_.size());
  for (const auto& [key, states] : groups_) {
    for (const Value& v : key) w.value(v);
    for (const auto& s : states) write_sum_state(w, s);
  }
}

void GroupByGla::read_body(ByteReader& r) {
  uint64_t seen = r.u64();
  uint8_t strata = r.u8();
  if (strata > 2) raise(ErrorCode::kMalformedBytes, "bad stratum status " + std::to_string(strata));
  uint32_t n_aggs = r.u32();
  uint32_t arity = r.u32();
  if (n_aggs != query_->aggregates.size() || arity != query_->group_columns.size()) {
    raise(ErrorCode::kMalformedBytes, "state shape does not match the query binding");
  }
  uint64_t n_groups = r.u64();
  // Sanity bound before reserving.
  if (n_groups > r.remaining()) raise(ErrorCode::kMalformedBytes, "group count exceeds buffer");
  GroupMap groups;
  groups.reserve(n_groups);
  for (uint64_t g = 0; g < n_groups; ++g) {
    GroupKey key;
    for (uint32_t c = 0; c < arity; ++c) key.push_back(r.value());
    std::vector<SumState> states;
    for (uint32_t i = 0; i < n_aggs; ++i) states.push_back(read_sum_state(r));
    if (!groups.emplace(std::move(key), std::move(states)).second) {
      raise(ErrorCode::kMalformedBytes, "duplicate group key in state");
    }
  }
  groups_ = std::move(groups);
  total_seen_ = seen;
  strata_ = static_cast<StratumStatus>(strata);
}

void GroupByGla::serialize(ByteWriter& w) const {
  write_header(w, GlaKind::kGroupBy);
  write_body(w);
}

void GroupByGla::deserialize(ByteReader& r) {
  read_header(r, GlaKind::kGroupBy);
  read_body(r);
}

void GroupByGla::estimator_terminate(uint64_t local_cardinality) {
  if (total_seen_ > local_cardinality) {
    raise(ErrorCode::kInvalidArgument, "local sample exceeds the partition cardinality");
  }
  const bool exact = total_seen_ == local_cardinality;
  if (!exact && total_seen_ < 2) {
    mark_stratum_undefined();
    return;
  }
  strata_ = StratumStatus::kDefined;
  for (auto& [key, states] : groups_) {
    for (auto& s : states) {
      Moments m{s.moments.sum, s.moments.sum_sq, total_seen_};
      s.status = StratumStatus::kDefined;
      if (exact) {
        s.stratum = {m.sum, 0.0};
      } else {
        s.stratum = {estimation::point_estimate(m, local_cardinality),
                     estimation::variance_estimate(m, local_cardinality)};
      }
    }
  }
}

void GroupByGla::estimator_merge(const Gla& other) {
  const auto& o = dynamic_cast<const GroupByGla&>(other);
  if (strata_ == StratumStatus::kPending || o.strata_ == StratumStatus::kPending) {
    raise(ErrorCode::kInvalidArgument, "estimator_merge on a state that was not estimator-terminated");
  }
  // A group absent on one side had zero qualifying samples there, which
  // contributes est = 0 and est_var = 0; plain addition handles it.
  for (const auto& [key, states] : o.groups_) {
    auto [it, inserted] = groups_.try_emplace(key, std::vector<SumState>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
      SumState& mine = it->second[i];
      if (inserted) mine.status = strata_;
      mine.moments += states[i].moments;
      mine.stratum.est += states[i].stratum.est;
      mine.stratum.est_var += states[i].stratum.est_var;
    }
  }
  total_seen_ += o.total_seen_;
  if (o.strata_ == StratumStatus::kUndefined) strata_ = StratumStatus::kUndefined;
  if (strata_ == StratumStatus::kUndefined) {
    mark_stratum_undefined();
  }
}

void GroupByGla::mark_stratum_undefined() {
  strata_ = StratumStatus::kUndefined;
  for (auto& [key, states] : groups_) {
    for (auto& s : states) {
      s.status = StratumStatus::kUndefined;
      s.stratum = {};
    }
  }
}

std::vector<GroupEstimate> GroupByGla::estimate(const EstimateContext& ctx) const {
  const bool stratified = ctx.model == EstimationModel::kMultipleStratified;
  if (stratified && strata_ == StratumStatus::kPending) {
    raise(ErrorCode::kInvalidArgument, "stratified estimate before estimator_terminate");
  }
  std::vector<GroupEstimate> out;
  out.reserve(groups_.size());
  for (const auto& [key, states] : groups_) {
    GroupEstimate g{key, {}};
    for (const auto& s : states) {
      if (stratified) {
        g.aggregates.push_back(sum_estimate_stratified(s, ctx.confidence));
      } else {
        Moments m{s.moments.sum, s.moments.sum_sq, total_seen_};
        g.aggregates.push_back(estimation::estimate_from_moments(m, ctx.population, ctx.confidence));
      }
    }
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const GroupEstimate& a, const GroupEstimate& b) { return key_less(a.key, b.key); });
  return out;
}

bool GroupByGla::equals(const Gla& other) const {
  const auto* o = dynamic_cast<const GroupByGla*>(&other);
  return o && total_seen_ == o->total_seen_ && strata_ == o->strata_ && groups_ == o->groups_;
}

}  // namespace olagg::uda
