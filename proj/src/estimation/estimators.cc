#include "olagg/estimation/estimators.h"

#include <cmath>
#include <limits>

#include "olagg/core/error.h"
#include "olagg/estimation/normal.h"

namespace olagg::estimation {

const char* reason_name(Unavailable::Reason reason) {
  switch (reason) {
    case Unavailable::Reason::kInsufficientSample: return "insufficient_sample";
    case Unavailable::Reason::kInfiniteVariance: return "infinite_variance";
  }
  return "?";
}

double Estimate::relative_width() const {
  double w = width();
  if (w == 0) return 0;
  if (estimator == 0) return std::numeric_limits<double>::infinity();
  return w / std::fabs(estimator);
}

namespace {

void check_sample(const Moments& m, uint64_t population, uint64_t min_count) {
  if (m.count < min_count) {
    raise(ErrorCode::kInvalidArgument, "sample of " + std::to_string(m.count) + " tuples; need at least " +
                                           std::to_string(min_count));
  }
  if (m.count > population) {
    raise(ErrorCode::kInvalidArgument, "sample of " + std::to_string(m.count) +
                                           " tuples exceeds the population of " + std::to_string(population));
  }
}

}  // namespace

double point_estimate(const Moments& m, uint64_t population) {
  check_sample(m, population, 1);
  return static_cast<double>(population) / static_cast<double>(m.count) * m.sum;
}

double variance_estimate(const Moments& m, uint64_t population) {
  check_sample(m, population, 2);
  const double d = static_cast<double>(population);
  const double s = static_cast<double>(m.count);
  const double scale = d * static_cast<double>(population - m.count) / (s * s * (s - 1));
  const double spread = s * m.sum_sq - m.sum * m.sum;
  const double v = scale * spread;
  return v > 0 ? v : 0.0;
}

double true_variance(std::span<const double> contributions, uint64_t sample_size) {
  const uint64_t population = contributions.size();
  if (population < 2) raise(ErrorCode::kInvalidArgument, "true_variance needs |D| >= 2");
  if (sample_size < 1 || sample_size > population) {
    raise(ErrorCode::kInvalidArgument, "sample size must lie in [1, |D|]");
  }
  // Neumaier-compensated sums.
  double s1 = 0, c1 = 0, s2 = 0, c2 = 0;
  auto add = [](double& sum, double& comp, double x) {
    double t = sum + x;
    comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  };
  for (double f : contributions) {
    add(s1, c1, f);
    add(s2, c2, f * f);
  }
  s1 += c1;
  s2 += c2;
  const double d = static_cast<double>(population);
  const double k = static_cast<double>(sample_size);
  const double v = (d - k) / ((d - 1) * k) * (d * s2 - s1 * s1);
  return v > 0 ? v : 0.0;
}

Interval bounds(double estimator, double est_var, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    raise(ErrorCode::kInvalidArgument, "confidence must lie in (0, 1)");
  }
  if (!(est_var >= 0)) raise(ErrorCode::kInvalidArgument, "variance must be non-negative");
  const double sigma = std::sqrt(est_var);
  if (sigma == 0) return {estimator, estimator};
  const double alpha = 1 - confidence;
  const double lo = normal_quantile(alpha / 2);
  const double hi = normal_quantile(confidence + alpha / 2);
  return {estimator + lo * sigma, estimator + hi * sigma};
}

Outcome<StratumEstimate> stratified_combine(std::span<const StratumInput> strata) {
  if (strata.empty()) raise(ErrorCode::kInvalidArgument, "stratified_combine needs at least one stratum");
  StratumEstimate out;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    if (!strata[i].defined) {
      return Unavailable{Unavailable::Reason::kInfiniteVariance,
                         "stratum " + std::to_string(i) + " has no variance estimate"};
    }
    out.est += strata[i].estimate.est;
    out.est_var += strata[i].estimate.est_var;
  }
  return out;
}

Outcome<Estimate> estimate_from_moments(const Moments& m, uint64_t population, double confidence) {
  Estimate e;
  e.confidence = confidence;
  e.sample_fraction = population ? static_cast<double>(m.count) / static_cast<double>(population) : 1.0;
  if (m.count > 0 && m.count == population) {
    e.estimator = e.lower = e.upper = m.sum;
    return e;
  }
  if (m.count < 2) {
    return Unavailable{Unavailable::Reason::kInsufficientSample,
                       "sample of " + std::to_string(m.count) + " tuples; bounds need at least 2"};
  }
  e.estimator = point_estimate(m, population);
  Interval iv = bounds(e.estimator, variance_estimate(m, population), confidence);
  e.lower = iv.lower;
  e.upper = iv.upper;
  return e;
}

Estimate estimate_from_stratum(const StratumEstimate& s, double confidence) {
  Estimate e;
  e.confidence = confidence;
  e.estimator = s.est;
  Interval iv = bounds(s.est, s.est_var, confidence);
  e.lower = iv.lower;
  e.upper = iv.upper;
  return e;
}

Outcome<StratumEstimate> stratum_from_moments(const Moments& m, uint64_t local_population) {
  if (m.count == local_population) return StratumEstimate{m.sum, 0.0};
  if (m.count < 2) {
    return Unavailable{Unavailable::Reason::kInsufficientSample,
                       "local sample of " + std::to_string(m.count) + " tuples; stratum variance undefined"};
  }
  return StratumEstimate{point_estimate(m, local_population), variance_estimate(m, local_population)};
}

}  // namespace olagg::estimation
