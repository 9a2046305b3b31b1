#include "olagg/harness/bench.h"

#include "olagg/core/error.h"
#include "olagg/engine/query.h"
#include "olagg/harness/experiment.h"
#include "olagg/randomizer/generators.h"

namespace olagg::harness {

double BenchResult::median_with() const { return median(with_snapshots_ms); }
double BenchResult::median_without() const { return median(without_ms); }
double BenchResult::median_sync() const { return median(sync_ms); }
double BenchResult::overhead() const { return median_with() / median_without() - 1.0; }

PartitionedDataset bench_dataset(uint64_t tuples, uint32_t nodes, uint64_t seed) {
  if (nodes < 1) raise(ErrorCode::kInvalidArgument, "need at least one node");
  PartitionedDataset out;
  for (uint32_t i = 0; i < nodes; ++i) {
    const uint64_t n = tuples / nodes + (i < tuples % nodes ? 1 : 0);
    out.partitions.push_back(std::make_shared<const Table>(randomizer::gen_uniform(n, 1, 100, seed + i)));
  }
  out.meta = meta_for(out.partitions);
  return out;
}

double timed_run(const QueryPlan& plan, const PartitionedDataset& data, const engine::EngineConfig& config,
                 std::chrono::milliseconds period, uint64_t* snapshots) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto q = engine::Query::submit("bench", plan, data, config);
  uint64_t taken = 0;
  if (period.count() > 0) {
    while (!q->wait_for(period)) {
      q->request_partial();
      ++taken;
    }
  }
  q->wait();
  const auto t1 = Clock::now();
  if (snapshots) *snapshots += taken;
  if (!q->node_failures().empty()) raise(ErrorCode::kRuntime, "bench node failed: " + q->node_failures().front());
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

BenchResult overhead_benchmark(const BenchSpec& spec) {
  if (spec.reps < 1) raise(ErrorCode::kInvalidArgument, "reps must be >= 1");
  spec.engine.validate(spec.nodes);
  const PartitionedDataset data = bench_dataset(spec.tuples, spec.nodes, spec.seed);
  QueryPlan plan = parse_plan(R"({"f": {"col": "value"}})");
  plan.model = EstimationModel::kSingleAsync;

  BenchResult r;
  // Warm-up, not recorded.
  timed_run(plan, data, spec.engine, std::chrono::milliseconds(0));
  for (uint32_t i = 0; i < spec.reps; ++i) {
    r.without_ms.push_back(timed_run(plan, data, spec.engine, std::chrono::milliseconds(0)));
    r.with_snapshots_ms.push_back(timed_run(plan, data, spec.engine, spec.period, &r.snapshots));
  }
  QueryPlan sync = plan;
  sync.model = EstimationModel::kSingleSynchronized;
  for (uint32_t i = 0; i < spec.sync_reps; ++i) {
    r.sync_ms.push_back(timed_run(sync, data, spec.engine, std::chrono::milliseconds(0)));
  }
  return r;
}

}  // namespace olagg::harness
