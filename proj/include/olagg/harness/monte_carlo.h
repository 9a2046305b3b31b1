#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "olagg/core/plan.h"
#include "olagg/core/table.h"
#include "olagg/engine/config.h"

namespace olagg::harness {

struct CoverageSpec {
  uint32_t nodes = 8;
  uint32_t trials = 100;
  uint64_t seed = 1;
  // Sample fractions at which every node is paused and a snapshot taken.
  std::vector<double> checkpoints{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool local_only = false;
  engine::EngineConfig engine;  // gate is supplied per trial
  // Optional progress callback (trial index).
  std::function<void(uint32_t)> on_trial;
};

struct CheckpointCoverage {
  double checkpoint = 0;
  uint32_t trials = 0;
  uint32_t covered = 0;
  uint32_t unavailable = 0;  // no bounds; counted as not covered
  std::vector<double> sample_fractions;
  std::vector<double> relative_widths;  // available snapshots only

  double coverage() const { return trials ? static_cast<double>(covered) / trials : 0.0; }
};

// Per trial: reshuffle `data` with a new seed, run the first aggregate of the
// ungrouped `plan` (its model and confidence), pause at each checkpoint and
// test whether the bounds contain the exact answer. Throws kInvalidArgument
// for trials = 0, a synchronized model, or a grouped plan.
std::vector<CheckpointCoverage> monte_carlo_coverage(const QueryPlan& plan, const Table& data,
                                                     const CoverageSpec& spec);

// Exact coverage of the single-estimator bounds over every size-k sample of a
// small population: fraction of the C(|D|, k) subsets whose bounds contain
// the total. `contributions[d]` is f(d) if p(d) else 0. Samples without
// bounds count as misses.
double exact_coverage(std::span<const double> contributions, std::size_t k, double confidence);

}  // namespace olagg::harness
