#pragma once

#include <atomic>
#include <cstdint>
#include <future>
#include <memory>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "olagg/core/table.h"
#include "olagg/engine/bounded_queue.h"
#include "olagg/engine/messages.h"
#include "olagg/engine/progress_gate.h"
#include "olagg/engine/sync_ticket.h"
#include "olagg/uda/gla.h"

namespace olagg::engine {

struct NodeOptions {
  std::string query_id;
  NodeId id = 0;
  uint32_t threads = 1;
  std::size_t chunk_capacity = kDefaultChunkCapacity;
  std::size_t queue_depth = 4;
  double delay_ms_per_chunk = 0;
  std::optional<double> kill_after_fraction;
  std::shared_ptr<SyncTicket> sync;    // synchronized model only
  std::shared_ptr<ProgressGate> gate;  // optional
};

// One logical node: a reader thread cutting the partition into chunks and a
// pool of workers accumulating them. Each worker checks a state out of the
// node's state list for the duration of one chunk.
//
// Snapshot protocol: a request takes every idle state and bumps the list's
// generation; states still checked out join the snapshot when their chunk is
// done. Once all are in, they are merged, a serialized copy is sent, and the
// merged state is kept aside and folded into the next state a worker returns,
// so its tuples stay counted exactly once. A request that arrives while one
// is being collected gets the pending reply.
class WorkerNode {
 public:
  WorkerNode(NodeOptions options, std::shared_ptr<const Table> partition, std::unique_ptr<uda::Gla> prototype);
  ~WorkerNode();

  WorkerNode(const WorkerNode&) = delete;
  WorkerNode& operator=(const WorkerNode&) = delete;

  void start();
  std::shared_future<SnapshotReplyMsg> request_snapshot(const SnapshotRequestMsg& request);
  void stop();
  // Ready once the workers have exited; carries the final local state.
  std::shared_future<DoneMsg> done() const { return final_future_; }
  void join();

  NodeId id() const { return options_.id; }
  NodeStatus status() const { return status_.load(); }
  uint64_t consumed() const { return consumed_.load(); }
  uint64_t local_cardinality() const { return partition_->size(); }
  // First error raised while accumulating; such a node is reported dead.
  std::string failure() const;

 private:
  struct Checkout {
    std::unique_ptr<uda::Gla> state;
    uint64_t generation;
  };
  struct PendingSnapshot {
    uint64_t ticket = 0;
    std::promise<SnapshotReplyMsg> promise;
    std::shared_future<SnapshotReplyMsg> future;
    std::vector<std::unique_ptr<uda::Gla>> collected;
    int awaiting = 0;
  };

  void reader_loop();
  void worker_loop();
  void die();

  Checkout checkout();
  void give_back(Checkout c);
  void finish_snapshot_locked();
  void finalize();
  SnapshotReplyMsg reply_for(const uda::Gla* state, uint64_t ticket, bool final) const;

  NodeOptions options_;
  std::shared_ptr<const Table> partition_;
  std::unique_ptr<uda::Gla> prototype_;

  BoundedQueue<Chunk> queue_;
  std::thread reader_;
  std::vector<std::thread> workers_;
  std::atomic<int> active_workers_{0};

  std::atomic<NodeStatus> status_{NodeStatus::kLoading};
  std::atomic<bool> stop_{false};
  std::mutex stop_mu_;  // lets stop() cut a delay sleep short
  std::condition_variable stop_cv_;
  std::atomic<bool> dead_{false};
  std::atomic<uint64_t> consumed_{0};

  mutable std::mutex mu_;  // guards everything below
  std::vector<std::unique_ptr<uda::Gla>> idle_;
  int checked_out_ = 0;  // current-generation states held by workers
  uint64_t generation_ = 0;
  std::unique_ptr<uda::Gla> retained_;
  std::optional<PendingSnapshot> pending_;
  std::string failure_;

  std::promise<DoneMsg> final_promise_;
  std::shared_future<DoneMsg> final_future_;
  bool started_ = false;
};

}  // namespace olagg::engine
