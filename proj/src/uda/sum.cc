#include "olagg/uda/sum.h"

#include "olagg/core/error.h"

namespace olagg::uda {

SumState sum_merge(const SumState& a, const SumState& b) {
  SumState out = a;
  out.moments += b.moments;
  return out;
}

Outcome<Estimate> sum_estimate_single(const SumState& s, uint64_t population, double confidence) {
  return estimation::estimate_from_moments(s.moments, population, confidence);
}

void sum_estimator_terminate(SumState& s, uint64_t local_cardinality) {
  auto stratum = estimation::stratum_from_moments(s.moments, local_cardinality);
  if (stratum) {
    s.status = StratumStatus::kDefined;
    s.stratum = stratum.value();
  } else {
    s.status = StratumStatus::kUndefined;
    s.stratum = {};
  }
}

SumState sum_estimator_merge(const SumState& a, const SumState& b) {
  if (a.status == StratumStatus::kPending || b.status == StratumStatus::kPending) {
    raise(ErrorCode::kInvalidArgument, "estimator_merge on a state that was not estimator-terminated");
  }
  SumState out;
  out.moments = a.moments + b.moments;
  if (a.status == StratumStatus::kUndefined || b.status == StratumStatus::kUndefined) {
    out.status = StratumStatus::kUndefined;
    return out;
  }
  out.status = StratumStatus::kDefined;
  out.stratum = {a.stratum.est + b.stratum.est, a.stratum.est_var + b.stratum.est_var};
  return out;
}

Outcome<Estimate> sum_estimate_stratified(const SumState& s, double confidence) {
  switch (s.status) {
    case StratumStatus::kPending:
      raise(ErrorCode::kInvalidArgument, "stratified estimate before estimator_terminate");
    case StratumStatus::kUndefined:
      return Unavailable{Unavailable::Reason::kInfiniteVariance, "a stratum has an undefined variance"};
    case StratumStatus::kDefined: break;
  }
  return estimation::estimate_from_stratum(s.stratum, confidence);
}

void write_sum_state(ByteWriter& w, const SumState& s) {
  w.f64(s.moments.sum);
  w.f64(s.moments.sum_sq);
  w.u64(s.moments.count);
  w.u8(static_cast<uint8_t>(s.status));
  w.f64(s.stratum.est);
  w.f64(s.stratum.est_var);
}

SumState read_sum_state(ByteReader& r) {
  SumState s;
  s.moments.sum = r.f64();
  s.moments.sum_sq = r.f64();
  s.moments.count = r.u64();
  uint8_t status = r.u8();
  if (status > 2) raise(ErrorCode::kMalformedBytes, "bad stratum status " + std::to_string(status));
  s.status = static_cast<StratumStatus>(status);
  s.stratum.est = r.f64();
  s.stratum.est_var = r.f64();
  return s;
}

}  // namespace olagg::uda
