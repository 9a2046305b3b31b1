#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string_view>

#include "olagg/core/chunk.h"
#include "olagg/engine/merge.h"
#include "olagg/engine/progress_gate.h"
#include "olagg/uda/binding.h"

namespace olagg::engine {

struct FaultPlan {
  std::map<NodeId, double> delay_ms_per_chunk;
  // The node dies once it has read this fraction of its partition. 1.0 means
  // it dies right after reading the last chunk.
  std::map<NodeId, double> kill_after_fraction;

  bool empty() const { return delay_ms_per_chunk.empty() && kill_after_fraction.empty(); }
  // Throws kInvalidArgument for negative delays, fractions outside [0, 1] or
  // node ids >= nodes.
  void validate(std::size_t nodes) const;
};

// "id:ms" and "id:frac" as given on the command line.
void parse_delay(std::string_view text, FaultPlan& plan);
void parse_kill(std::string_view text, FaultPlan& plan);

struct EngineConfig {
  uint32_t threads_per_node = 1;
  std::size_t chunk_capacity = kDefaultChunkCapacity;
  std::size_t queue_depth = 4;  // chunks buffered between a node's reader and its workers
  Topology topology = Topology::kCentralized;
  // How long a snapshot waits for a node before using its last known state.
  std::chrono::milliseconds snapshot_timeout{10'000};
  std::size_t dimension_cap = uda::kDefaultDimensionCap;
  FaultPlan faults;
  // Optional global tuple budget (experiments). Not allowed with the
  // synchronized model, which does its own pacing.
  std::shared_ptr<ProgressGate> gate;

  void validate(std::size_t nodes) const;
};

}  // namespace olagg::engine
