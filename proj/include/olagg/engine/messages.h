#pragma once

// Coordinator <-> worker messages. Delivery is in-process (futures and
// method calls), but every payload that crosses the boundary is plain data,
// and aggregate states travel serialized, so a network transport could carry
// them unchanged.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "olagg/core/chunk.h"

namespace olagg::engine {

enum class NodeStatus : uint8_t { kLoading, kRunning, kMergingFinal, kFinished, kDead };

const char* node_status_name(NodeStatus s);  // loading | running | merging_final | finished | dead

inline bool is_terminal(NodeStatus s) { return s == NodeStatus::kFinished || s == NodeStatus::kDead; }

// Coordinator -> node: start streaming the partition.
struct SubmitMsg {
  std::string query_id;
  NodeId node = 0;
};

// Coordinator -> node: merge your states and send a copy.
struct SnapshotRequestMsg {
  std::string query_id;
  uint64_t ticket = 0;
  NodeId node = 0;
};

// Node -> coordinator. `state` is empty for a dead node. `ticket` is the
// request that produced the payload, which differs from the asker's own
// ticket when the request was coalesced.
struct SnapshotReplyMsg {
  std::string query_id;
  uint64_t ticket = 0;
  NodeId node = 0;
  NodeStatus status = NodeStatus::kRunning;
  uint64_t tuples = 0;  // sampling units folded into `state`
  bool final = false;
  std::vector<std::byte> state;
};

// Coordinator -> node: halt after the chunks in progress.
struct StopMsg {
  std::string query_id;
  NodeId node = 0;
};

// Node -> coordinator after its workers exit; same payload as a final reply.
using DoneMsg = SnapshotReplyMsg;

}  // namespace olagg::engine
