#pragma once

#include <span>
#include <vector>

#include "olagg/core/dataset.h"
#include "olagg/core/plan.h"
#include "olagg/uda/gla.h"

namespace olagg::harness {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

// Single-threaded pass computing the exact answer of `plan` over the union of
// `fact` tables, independent from the aggregate-state code: joins are nested
// loops, groups live in an ordered map, sums are compensated. Groups appear
// only when some joined row satisfies p; an ungrouped plan always yields its
// single group. Sorted by key.
std::vector<uda::GroupValue> brute_force(const QueryPlan& plan, std::span<const Table* const> fact,
                                         const Table* dimension = nullptr);
std::vector<uda::GroupValue> brute_force(const QueryPlan& plan, const Table& fact, const Table* dimension = nullptr);
std::vector<uda::GroupValue> brute_force(const QueryPlan& plan, const PartitionedDataset& data,
                                         const Table* dimension = nullptr);

// Per fact tuple: the sum of f over its qualifying join results (or f(t)
// when p holds and 0 otherwise for flat plans), for the first aggregate of an
// ungrouped plan. Used by the enumeration oracles.
std::vector<double> contributions(const QueryPlan& plan, const Table& fact, const Table* dimension = nullptr);

}  // namespace olagg::harness
