#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "olagg/core/dataset.h"
#include "olagg/core/plan.h"
#include "olagg/engine/config.h"
#include "olagg/engine/messages.h"
#include "olagg/engine/sync_ticket.h"
#include "olagg/engine/worker_node.h"
#include "olagg/uda/binding.h"

namespace olagg::engine {

enum class QueryStatus { kRunning, kStopped, kFinished };
const char* query_status_name(QueryStatus s);  // running | stopped | finished

struct NodeReport {
  NodeId id = 0;
  NodeStatus status = NodeStatus::kLoading;
  uint64_t consumed = 0;           // tuples in the state used for this snapshot
  uint64_t local_cardinality = 0;  // |D_i|
  bool stale = false;              // timed out; last known state used
};

// A consistent merged view of the query.
struct Snapshot {
  uint64_t ticket = 0;
  int64_t at_millis = 0;
  double sample_fraction = 0;  // merged tuples / sum of live |D_i|
  uint64_t tuples_merged = 0;
  std::vector<uda::GroupEstimate> groups;
  // Multiple model only: the single estimator over the same merged sample.
  std::vector<uda::GroupEstimate> single_groups;
  std::vector<NodeReport> nodes;
  bool degraded = false;  // some partition was lost
  bool terminal = false;
  QueryStatus status = QueryStatus::kRunning;
};

int64_t now_millis();

// One running query: a coordinator over one WorkerNode per partition.
class Query {
 public:
  // Validates the plan, dataset and config, then starts every node. Throws
  // validation errors before any thread starts.
  static std::shared_ptr<Query> submit(std::string id, const QueryPlan& plan, const PartitionedDataset& data,
                                       EngineConfig config = {}, std::shared_ptr<const Table> dimension = nullptr);

  ~Query();
  Query(const Query&) = delete;
  Query& operator=(const Query&) = delete;

  const std::string& id() const { return id_; }
  const QueryPlan& plan() const { return query_->plan; }
  EstimationModel model() const { return query_->plan.model; }
  double confidence() const { return query_->plan.confidence; }
  const DatasetMeta& meta() const { return meta_; }
  int64_t started_at_millis() const { return started_at_; }
  const uda::BoundQuery& bound() const { return *query_; }

  // Merged estimate now. Concurrent callers share one assembly. After
  // termination returns the terminal snapshot.
  Snapshot request_partial();

  // Halts every node after its current chunk. Throws kAlreadyTerminal.
  Snapshot stop();

  // Blocks until the query is terminal and returns the terminal snapshot.
  Snapshot wait();
  bool wait_for(std::chrono::milliseconds timeout);

  QueryStatus status() const;
  bool terminal() const;
  bool degraded() const;

  // Exact per-group values of everything merged at termination. Throws
  // kInvalidArgument before termination.
  std::vector<uda::GroupValue> exact_result() const;
  // The terminal merged state.
  const uda::Gla& final_state() const;

  std::vector<NodeId> lost_partitions() const;
  std::vector<std::string> node_failures() const;
  uint64_t consumed() const;
  const WorkerNode& node(NodeId id) const { return *nodes_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  Query() = default;

  Snapshot assemble(const std::vector<std::shared_future<SnapshotReplyMsg>>& replies, uint64_t ticket,
                    bool final, std::unique_ptr<uda::Gla>* merged_out);
  Snapshot assemble_running();
  void finish(QueryStatus status);
  void monitor();

  std::string id_;
  std::shared_ptr<const uda::BoundQuery> query_;
  std::unique_ptr<uda::Gla> prototype_;
  DatasetMeta meta_;
  EngineConfig config_;
  std::shared_ptr<SyncTicket> sync_;
  std::vector<std::unique_ptr<WorkerNode>> nodes_;
  int64_t started_at_ = 0;

  std::mutex assembly_mu_;  // one assembly at a time
  std::vector<std::optional<SnapshotReplyMsg>> last_known_;
  std::atomic<uint64_t> next_ticket_{1};

  std::mutex coalesce_mu_;
  bool assembling_ = false;
  std::shared_future<Snapshot> inflight_;

  mutable std::mutex state_mu_;
  std::condition_variable terminal_cv_;
  bool stopping_ = false;
  bool terminal_ = false;
  QueryStatus status_ = QueryStatus::kRunning;
  std::optional<Snapshot> final_;
  std::unique_ptr<uda::Gla> final_state_;

  std::thread monitor_;
};

}  // namespace olagg::engine
