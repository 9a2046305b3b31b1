#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "olagg/core/dataset.h"
#include "olagg/core/plan.h"
#include "olagg/engine/config.h"

namespace olagg::harness {

struct BenchSpec {
  uint64_t tuples = 100'000'000;
  uint32_t nodes = 8;
  uint32_t reps = 10;
  uint32_t sync_reps = 10;  // 0 skips the synchronized runs
  std::chrono::milliseconds period{1000};
  uint64_t seed = 1;
  engine::EngineConfig engine;
};

struct BenchResult {
  std::vector<double> with_snapshots_ms;
  std::vector<double> without_ms;
  std::vector<double> sync_ms;
  uint64_t snapshots = 0;  // taken across all snapshot runs

  double median_with() const;
  double median_without() const;
  double median_sync() const;
  // median_with / median_without - 1
  double overhead() const;
};

// Uniform integers in [1, 100] under column `value`, generated directly per
// partition (already random, no shuffle needed).
PartitionedDataset bench_dataset(uint64_t tuples, uint32_t nodes, uint64_t seed);

// Wall time from submit to terminal, snapshotting every `period` (0 for
// none). `snapshots` receives the number taken.
double timed_run(const QueryPlan& plan, const PartitionedDataset& data, const engine::EngineConfig& config,
                 std::chrono::milliseconds period, uint64_t* snapshots = nullptr);

// SUM(value) over bench_dataset. Runs with and without snapshots are
// interleaved so drift hits both equally.
BenchResult overhead_benchmark(const BenchSpec& spec);

}  // namespace olagg::harness
