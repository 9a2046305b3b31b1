#pragma once

#include <cstdint>

#include "olagg/core/expr.h"
#include "olagg/core/pred.h"
#include "olagg/estimation/estimators.h"
#include "olagg/uda/serde.h"

namespace olagg::uda {

using estimation::Estimate;
using estimation::Moments;
using estimation::Outcome;
using estimation::StratumEstimate;
using estimation::Unavailable;

// Where a state stands with respect to the stratified estimator.
enum class StratumStatus : uint8_t {
  kPending = 0,    // estimator_terminate not called yet
  kDefined = 1,    // est / est_var valid
  kUndefined = 2,  // fewer than two local samples somewhere; variance infinite
};

struct SumState {
  Moments moments;
  StratumStatus status = StratumStatus::kPending;
  StratumEstimate stratum;

  friend bool operator==(const SumState&, const SumState&) = default;
};

// count += 1; sum and sum_sq grow only when p holds.
inline void sum_accumulate(SumState& s, TupleView t, const BoundExpr& f, const BoundPred& p) {
  if (p.eval(t)) {
    s.moments.add_qualifying(f.eval(t));
  } else {
    s.moments.add_rejected();
  }
}

// Component-wise addition of the moments. Stratum fields are not touched.
SumState sum_merge(const SumState& a, const SumState& b);

Outcome<Estimate> sum_estimate_single(const SumState& s, uint64_t population, double confidence);

// Fills the stratum fields from the local moments and |D_i|.
void sum_estimator_terminate(SumState& s, uint64_t local_cardinality);

// Adds est and est_var (an undefined side makes the result undefined). The
// moments are added as well so the merged state still reports its sample size.
SumState sum_estimator_merge(const SumState& a, const SumState& b);

// Bounds from a stratified state; kInfiniteVariance while any stratum is
// undefined. Throws kInvalidArgument if estimator_terminate never ran.
Outcome<Estimate> sum_estimate_stratified(const SumState& s, double confidence);

void write_sum_state(ByteWriter& w, const SumState& s);
SumState read_sum_state(ByteReader& r);

}  // namespace olagg::uda
