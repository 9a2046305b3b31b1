#include "olagg/uda/sum_gla.h"

#include "olagg/core/error.h"

namespace olagg::uda {

SumGla::SumGla(std::shared_ptr<const BoundQuery> query) : query_(std::move(query)) { init(); }

void SumGla::init() {
  states_.assign(query_->aggregates.size(), SumState{});
  seen_ = 0;
}

void SumGla::accumulate(TupleView t) {
  ++seen_;
  if (!query_->predicate.eval(t)) {
    for (auto& s : states_) s.moments.add_rejected();
    return;
  }
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i].moments.add_qualifying(query_->aggregates[i].eval(t));
}

void SumGla::accumulate_chunk(const Chunk& chunk) {
  if (states_.size() != 1) {
    Gla::accumulate_chunk(chunk);
    return;
  }
  // Hot path: one aggregate, locals kept in registers.
  const BoundExpr& f = query_->aggregates[0];
  const BoundPred& p = query_->predicate;
  Moments& m = states_[0].moments;
  double sum = m.sum, sum_sq = m.sum_sq;
  const std::size_t n = chunk.size();
  for (std::size_t i = 0; i < n; ++i) {
    TupleView t = chunk.row(i);
    if (p.eval(t)) {
      double v = f.eval(t);
      sum += v;
      sum_sq += v * v;
    }
  }
  m.sum = sum;
  m.sum_sq = sum_sq;
  m.count += n;
  seen_ += n;
}

void SumGla::merge(const Gla& other) {
  const auto& o = dynamic_cast<const SumGla&>(other);
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i] = sum_merge(states_[i], o.states_[i]);
  seen_ += o.seen_;
}

std::vector<GroupValue> SumGla::terminate() const {
  GroupValue g;
  for (const auto& s : states_) g.values.push_back(s.moments.sum);
  return {std::move(g)};
}

void SumGla::serialize(ByteWriter& w) const {
  write_header(w, GlaKind::kSum);
  w.u64(seen_);
  w.u32(static_cast<uint32_t>(states_.size()));
  for (const auto& s : states_) write_sum_state(w, s);
}

void SumGla::deserialize(ByteReader& r) {
  read_header(r, GlaKind::kSum);
  uint64_t seen = r.u64();
  uint32_t n = r.u32();
  if (n != query_->aggregates.size()) {
    raise(ErrorCode::kMalformedBytes, "state has " + std::to_string(n) + " aggregates, query has " +
                                          std::to_string(query_->aggregates.size()));
  }
  std::vector<SumState> states;
  for (uint32_t i = 0; i < n; ++i) states.push_back(read_sum_state(r));
  states_ = std::move(states);
  seen_ = seen;
}

void SumGla::estimator_terminate(uint64_t local_cardinality) {
  for (auto& s : states_) sum_estimator_terminate(s, local_cardinality);
}

void SumGla::estimator_merge(const Gla& other) {
  const auto& o = dynamic_cast<const SumGla&>(other);
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i] = sum_estimator_merge(states_[i], o.states_[i]);
  seen_ += o.seen_;
}

void SumGla::mark_stratum_undefined() {
  for (auto& s : states_) {
    s.status = StratumStatus::kUndefined;
    s.stratum = {};
  }
}

std::vector<GroupEstimate> SumGla::estimate(const EstimateContext& ctx) const {
  GroupEstimate g;
  for (const auto& s : states_) {
    if (ctx.model == EstimationModel::kMultipleStratified) {
      g.aggregates.push_back(sum_estimate_stratified(s, ctx.confidence));
    } else {
      g.aggregates.push_back(sum_estimate_single(s, ctx.population, ctx.confidence));
    }
  }
  return {std::move(g)};
}

bool SumGla::equals(const Gla& other) const {
  const auto* o = dynamic_cast<const SumGla*>(&other);
  return o && seen_ == o->seen_ && states_ == o->states_;
}

}  // namespace olagg::uda
