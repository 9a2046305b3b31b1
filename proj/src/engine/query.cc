#include "olagg/engine/query.h"

#include "olagg/core/error.h"
#include "olagg/engine/merge.h"

namespace olagg::engine {

const char* query_status_name(QueryStatus s) {
  switch (s) {
    case QueryStatus::kRunning: return "running";
    case QueryStatus::kStopped: return "stopped";
    case QueryStatus::kFinished: return "finished";
  }
  return "?";
}

int64_t now_millis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

namespace {

void check_dataset(const PartitionedDataset& data) {
  if (data.partitions.empty()) raise(ErrorCode::kInvalidArgument, "dataset has no partitions");
  data.meta.validate();
  if (data.meta.partitions.size() != data.partitions.size()) {
    raise(ErrorCode::kInvalidArgument, "dataset metadata lists " + std::to_string(data.meta.partitions.size()) +
                                           " partitions, " + std::to_string(data.partitions.size()) + " supplied");
  }
  for (std::size_t i = 0; i < data.partitions.size(); ++i) {
    if (!data.partitions[i]) raise(ErrorCode::kInvalidArgument, "partition " + std::to_string(i) + " is missing");
    const PartitionMeta& pm = data.meta.partitions[i];
    if (pm.node_id != i) raise(ErrorCode::kInvalidArgument, "partition metadata out of node order");
    if (pm.local_cardinality != data.partitions[i]->size()) {
      raise(ErrorCode::kInvalidArgument, "partition " + std::to_string(i) + " has " +
                                             std::to_string(data.partitions[i]->size()) + " rows, metadata says " +
                                             std::to_string(pm.local_cardinality));
    }
    if (!(data.partitions[i]->schema() == data.partitions[0]->schema())) {
      raise(ErrorCode::kTypeMismatch, "partition " + std::to_string(i) + " schema differs from partition 0");
    }
  }
}

}  // namespace

std::shared_ptr<Query> Query::submit(std::string id, const QueryPlan& plan, const PartitionedDataset& data,
                                     EngineConfig config, std::shared_ptr<const Table> dimension) {
  check_dataset(data);
  config.validate(data.partitions.size());
  if (plan.model == EstimationModel::kSingleSynchronized && config.gate) {
    raise(ErrorCode::kInvalidArgument, "a progress gate cannot drive the synchronized model");
  }

  std::shared_ptr<Query> q(new Query());
  q->id_ = std::move(id);
  q->query_ = uda::bind_query(plan, data.schema(), std::move(dimension), config.dimension_cap);
  q->prototype_ = uda::make_gla(q->query_);
  q->meta_ = data.meta;
  q->config_ = config;
  q->last_known_.resize(data.partitions.size());

  if (plan.model == EstimationModel::kSingleSynchronized) {
    std::vector<uint64_t> cards;
    for (const auto& p : data.partitions) cards.push_back(p->size());
    q->sync_ = std::make_shared<SyncTicket>(std::move(cards), config.chunk_capacity);
  }

  for (NodeId i = 0; i < data.partitions.size(); ++i) {
    NodeOptions o;
    o.query_id = q->id_;
    o.id = i;
    o.threads = config.threads_per_node;
    o.chunk_capacity = config.chunk_capacity;
    o.queue_depth = config.queue_depth;
    if (auto it = config.faults.delay_ms_per_chunk.find(i); it != config.faults.delay_ms_per_chunk.end()) {
      o.delay_ms_per_chunk = it->second;
    }
    if (auto it = config.faults.kill_after_fraction.find(i); it != config.faults.kill_after_fraction.end()) {
      o.kill_after_fraction = it->second;
    }
    o.sync = q->sync_;
    o.gate = config.gate;
    q->nodes_.push_back(std::make_unique<WorkerNode>(std::move(o), data.partitions[i], q->prototype_->fresh()));
  }

  q->started_at_ = now_millis();
  for (auto& n : q->nodes_) n->start();
  q->monitor_ = std::thread([raw = q.get()] { raw->monitor(); });
  return q;
}

Query::~Query() {
  {
    std::lock_guard lk(state_mu_);
    stopping_ = true;
  }
  for (auto& n : nodes_) n->stop();
  if (monitor_.joinable()) monitor_.join();
  nodes_.clear();
}

Snapshot Query::assemble(const std::vector<std::shared_future<SnapshotReplyMsg>>& replies, uint64_t ticket,
                         bool final, std::unique_ptr<uda::Gla>* merged_out) {
  const auto deadline = std::chrono::steady_clock::now() + config_.snapshot_timeout;
  const bool stratified = query_->plan.model == EstimationModel::kMultipleStratified;

  Snapshot snap;
  snap.ticket = ticket;
  std::vector<std::unique_ptr<uda::Gla>> plain;
  std::vector<std::unique_ptr<uda::Gla>> strata;
  uint64_t live_cardinality = 0;

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SnapshotReplyMsg* reply = nullptr;
    NodeReport report;
    report.id = static_cast<NodeId>(i);
    report.local_cardinality = nodes_[i]->local_cardinality();
    bool ready = true;
    if (final) {
      replies[i].wait();
    } else {
      ready = replies[i].wait_until(deadline) == std::future_status::ready;
    }
    if (ready) {
      last_known_[i] = replies[i].get();
    } else {
      report.stale = true;
    }
    if (last_known_[i]) reply = &*last_known_[i];

    report.status = reply ? reply->status : nodes_[i]->status();
    report.consumed = reply ? reply->tuples : 0;
    const bool dead = report.status == NodeStatus::kDead;
    if (dead) snap.degraded = true;
    if (!dead) live_cardinality += report.local_cardinality;

    std::unique_ptr<uda::Gla> state;
    if (reply && !dead && !reply->state.empty()) state = uda::deserialize(*prototype_, reply->state);

    if (stratified) {
      auto s = state ? state->clone() : prototype_->fresh();
      if (dead || (!state && report.local_cardinality > 0)) {
        s->mark_stratum_undefined();
      } else {
        s->estimator_terminate(report.local_cardinality);
      }
      strata.push_back(std::move(s));
    }
    if (state) plain.push_back(std::move(state));
    snap.nodes.push_back(report);
  }

  std::unique_ptr<uda::Gla> merged =
      plain.empty() ? prototype_->fresh() : merge_topology(std::move(plain), config_.topology);
  uda::EstimateContext ctx{query_->plan.model, query_->plan.confidence, meta_.total_cardinality};
  if (stratified) {
    auto est = merge_topology(std::move(strata), config_.topology, MergeKind::kEstimator);
    snap.groups = est->estimate(ctx);
    uda::EstimateContext single = ctx;
    single.model = EstimationModel::kSingleAsync;
    snap.single_groups = merged->estimate(single);
  } else {
    snap.groups = merged->estimate(ctx);
  }

  snap.tuples_merged = merged->tuples_seen();
  snap.sample_fraction =
      live_cardinality ? static_cast<double>(snap.tuples_merged) / static_cast<double>(live_cardinality) : 0.0;
  snap.at_millis = now_millis();
  for (auto* groups : {&snap.groups, &snap.single_groups}) {
    for (auto& g : *groups) {
      for (auto& a : g.aggregates) {
        if (!a.available()) continue;
        uda::Estimate e = a.value();
        e.sample_fraction = snap.sample_fraction;
        e.at_millis = snap.at_millis;
        a = e;
      }
    }
  }
  if (merged_out) *merged_out = std::move(merged);
  return snap;
}

Snapshot Query::assemble_running() {
  std::lock_guard lk(assembly_mu_);
  const uint64_t ticket = next_ticket_++;
  std::vector<std::shared_future<SnapshotReplyMsg>> replies;
  for (auto& n : nodes_) replies.push_back(n->request_snapshot({id_, ticket, n->id()}));
  return assemble(replies, ticket, false, nullptr);
}

Snapshot Query::request_partial() {
  {
    std::lock_guard lk(state_mu_);
    if (terminal_) return *final_;
  }
  std::unique_lock lk(coalesce_mu_);
  if (assembling_) {
    auto f = inflight_;
    lk.unlock();
    return f.get();
  }
  assembling_ = true;
  std::promise<Snapshot> promise;
  inflight_ = promise.get_future().share();
  lk.unlock();

  try {
    Snapshot s = assemble_running();
    promise.set_value(s);
    lk.lock();
    assembling_ = false;
    return s;
  } catch (...) {
    promise.set_exception(std::current_exception());
    lk.lock();
    assembling_ = false;
    throw;
  }
}

void Query::finish(QueryStatus status) {
  std::vector<std::shared_future<SnapshotReplyMsg>> replies;
  for (auto& n : nodes_) replies.push_back(n->done());
  std::unique_ptr<uda::Gla> merged;
  Snapshot snap;
  {
    std::lock_guard lk(assembly_mu_);
    snap = assemble(replies, next_ticket_++, true, &merged);
  }
  snap.terminal = true;
  snap.status = status;
  std::lock_guard lk(state_mu_);
  final_ = std::move(snap);
  final_state_ = std::move(merged);
  status_ = status;
  terminal_ = true;
  terminal_cv_.notify_all();
}

void Query::monitor() {
  for (auto& n : nodes_) n->done().wait();
  {
    std::lock_guard lk(state_mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  finish(QueryStatus::kFinished);
}

Snapshot Query::stop() {
  {
    std::lock_guard lk(state_mu_);
    if (terminal_ || stopping_) raise(ErrorCode::kAlreadyTerminal, "query " + id_ + " is already terminal");
    stopping_ = true;
  }
  for (auto& n : nodes_) n->stop();
  finish(QueryStatus::kStopped);
  std::lock_guard lk(state_mu_);
  return *final_;
}

Snapshot Query::wait() {
  std::unique_lock lk(state_mu_);
  terminal_cv_.wait(lk, [&] { return terminal_; });
  return *final_;
}

bool Query::wait_for(std::chrono::milliseconds timeout) {
  std::unique_lock lk(state_mu_);
  return terminal_cv_.wait_for(lk, timeout, [&] { return terminal_; });
}

QueryStatus Query::status() const {
  std::lock_guard lk(state_mu_);
  return status_;
}

bool Query::terminal() const {
  std::lock_guard lk(state_mu_);
  return terminal_;
}

bool Query::degraded() const {
  for (const auto& n : nodes_) {
    if (n->status() == NodeStatus::kDead) return true;
  }
  return false;
}

std::vector<uda::GroupValue> Query::exact_result() const { return final_state().terminate(); }

const uda::Gla& Query::final_state() const {
  std::lock_guard lk(state_mu_);
  if (!terminal_) raise(ErrorCode::kInvalidArgument, "query " + id_ + " has not terminated");
  return *final_state_;
}

std::vector<NodeId> Query::lost_partitions() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n->status() == NodeStatus::kDead) out.push_back(n->id());
  }
  return out;
}

std::vector<std::string> Query::node_failures() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    std::string f = n->failure();
    if (!f.empty()) out.push_back("node " + std::to_string(n->id()) + ": " + f);
  }
  return out;
}

uint64_t Query::consumed() const {
  uint64_t total = 0;
  for (const auto& n : nodes_) total += n->consumed();
  return total;
}

}  // namespace olagg::engine
