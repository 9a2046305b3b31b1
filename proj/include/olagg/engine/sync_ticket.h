#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <vector>

#include "olagg/core/chunk.h"

namespace olagg::engine {

// Synchronized sampling across nodes: a global ticket taken for every tuple,
// and readers held back so no node's sample fraction runs ahead of the
// slowest active node by more than `slack_tuples` of its own partition.
class SyncTicket {
 public:
  SyncTicket(std::vector<uint64_t> local_cardinalities, uint64_t slack_tuples);

  // One serialized access per tuple.
  void take() {
    std::lock_guard lk(ticket_mu_);
    ++tickets_;
  }
  uint64_t tickets() const {
    std::lock_guard lk(ticket_mu_);
    return tickets_;
  }

  // Blocks until `node`, having read `read` tuples, may read more. Returns
  // false when `cancel` became true.
  bool wait_turn(NodeId node, uint64_t read, const std::atomic<bool>& cancel);
  void report(NodeId node, uint64_t read);
  // The node no longer reads (finished, stopped or dead).
  void retire(NodeId node);
  // Wakes waiters so they re-check their cancel flags.
  void wake();

 private:
  double min_active_fraction() const;

  mutable std::mutex ticket_mu_;
  uint64_t tickets_ = 0;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<uint64_t> cardinality_;
  std::vector<uint64_t> read_;
  std::vector<bool> active_;
  uint64_t slack_;
};

}  // namespace olagg::engine
