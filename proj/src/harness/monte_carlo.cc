#include "olagg/harness/monte_carlo.h"

#include <cmath>

#include "olagg/core/error.h"
#include "olagg/engine/query.h"
#include "olagg/estimation/estimators.h"
#include "olagg/harness/experiment.h"
#include "olagg/harness/oracle.h"

namespace olagg::harness {

std::vector<CheckpointCoverage> monte_carlo_coverage(const QueryPlan& plan, const Table& data,
                                                     const CoverageSpec& spec) {
  if (spec.trials < 1) raise(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (plan.model == EstimationModel::kSingleSynchronized) {
    raise(ErrorCode::kInvalidArgument, "coverage checkpoints need the single or multiple model");
  }
  if (!plan.group_by.empty() || plan.dimension) {
    raise(ErrorCode::kInvalidArgument, "coverage runs take flat plans");
  }
  for (double c : spec.checkpoints) {
    if (!(c > 0 && c < 1)) raise(ErrorCode::kInvalidArgument, "checkpoints must lie in (0, 1)");
  }
  validate_confidence(plan.confidence);

  const double truth = brute_force(plan, data).at(0).values.at(0);
  std::vector<CheckpointCoverage> out(spec.checkpoints.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c].checkpoint = spec.checkpoints[c];

  for (uint32_t trial = 0; trial < spec.trials; ++trial) {
    PartitionedDataset parts = prepare(data, spec.nodes, spec.seed + trial, spec.local_only);
    engine::EngineConfig cfg = spec.engine;
    cfg.gate = std::make_shared<engine::ProgressGate>(0);
    auto q = engine::Query::submit("mc-" + std::to_string(trial), plan, parts, cfg);
    for (std::size_t c = 0; c < out.size(); ++c) {
      const auto budget = static_cast<uint64_t>(std::llround(spec.checkpoints[c] * data.size()));
      cfg.gate->advance_to(budget);
      cfg.gate->wait_quiescent();
      engine::Snapshot s = q->request_partial();
      const auto& est = s.groups.at(0).aggregates.at(0);
      CheckpointCoverage& cov = out[c];
      ++cov.trials;
      cov.sample_fractions.push_back(s.sample_fraction);
      if (!est.available()) {
        ++cov.unavailable;
        continue;
      }
      cov.relative_widths.push_back(est->relative_width());
      if (est->contains(truth)) ++cov.covered;
    }
    q->stop();
    if (spec.on_trial) spec.on_trial(trial);
  }
  return out;
}

double exact_coverage(std::span<const double> contributions, std::size_t k, double confidence) {
  const std::size_t n = contributions.size();
  if (n > 24) raise(ErrorCode::kInvalidArgument, "enumeration limited to 24 items");
  if (k < 1 || k > n) raise(ErrorCode::kInvalidArgument, "sample size must lie in [1, |D|]");
  CompensatedSum total;
  for (double f : contributions) total.add(f);
  uint64_t hits = 0, samples = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    estimation::Moments m;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) m.add_qualifying(contributions[i]);
    }
    ++samples;
    auto e = estimation::estimate_from_moments(m, n, confidence);
    if (e && e->contains(total.value())) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace olagg::harness
