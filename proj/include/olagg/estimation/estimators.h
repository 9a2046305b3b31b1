#pragma once

// Sampling-without-replacement estimator for SUM(f) WHERE P over a
// randomly ordered dataset D, given a sample S of size |S|:
//
//   X         = |D| / |S| * sum_{s in S, P(s)} f(s)
//   Var[X]    = (|D| - |S|) / ((|D| - 1) |S|) * (|D| sum_{P(d)} f^2(d) - (sum_{P(d)} f(d))^2)
//   EstVar[X] = |D| (|D| - |S|) / (|S|^2 (|S| - 1)) * (|S| sum_S f^2 - (sum_S f)^2)
//
// X and EstVar are unbiased for the aggregate and for Var[X] respectively.
// Bounds assume X is normally distributed.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace olagg::estimation {

// Running moments over a sample. `count` is |S|, every sampled tuple whether
// it satisfied P or not; sum and sum_sq only include qualifying tuples.
struct Moments {
  double sum = 0;
  double sum_sq = 0;
  uint64_t count = 0;

  void add_qualifying(double f) {
    sum += f;
    sum_sq += f * f;
    ++count;
  }
  void add_rejected() { ++count; }

  Moments& operator+=(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
    return *this;
  }
  friend Moments operator+(Moments a, const Moments& b) { return a += b; }
  friend bool operator==(const Moments&, const Moments&) = default;
};

struct Estimate {
  double estimator = 0;
  double lower = 0;
  double upper = 0;
  double confidence = 0;
  double sample_fraction = 0;
  int64_t at_millis = 0;  // wall clock, milliseconds since the Unix epoch

  double width() const { return upper - lower; }
  // (upper - lower) / estimator; 0 when the interval is degenerate.
  double relative_width() const;
  bool contains(double truth) const { return lower <= truth && truth <= upper; }
};

// Per-partition (stratum) estimator X_i and its estimated variance.
struct StratumEstimate {
  double est = 0;
  double est_var = 0;

  friend bool operator==(const StratumEstimate&, const StratumEstimate&) = default;
};

// Why bounds could not be produced. Not an error: the engine keeps running
// and the next snapshot may succeed.
struct Unavailable {
  enum class Reason {
    kInsufficientSample,  // |S| < 2, variance undefined
    kInfiniteVariance,    // a stratum is missing or undefined
  };
  Reason reason;
  std::string detail;
};

const char* reason_name(Unavailable::Reason reason);

template <typename T>
class Outcome {
 public:
  Outcome(T value) : repr_(std::move(value)) {}            // NOLINT
  Outcome(Unavailable why) : repr_(std::move(why)) {}      // NOLINT

  bool available() const { return std::holds_alternative<T>(repr_); }
  explicit operator bool() const { return available(); }
  const T& value() const { return std::get<T>(repr_); }
  const T* operator->() const { return &std::get<T>(repr_); }
  const Unavailable& unavailable() const { return std::get<Unavailable>(repr_); }

 private:
  std::variant<T, Unavailable> repr_;
};

// |D| / count * sum. Throws kInvalidArgument when count = 0 or count > D.
double point_estimate(const Moments& m, uint64_t population);

// Unbiased estimate of Var[X]; negative round-off is clamped to 0.
// Throws kInvalidArgument when count < 2 or count > D.
double variance_estimate(const Moments& m, uint64_t population);

// Var[X] for samples of `sample_size` drawn from a known population.
// `contributions[d]` is f(d) when P(d) holds and 0 otherwise, so |D| is the
// span's size. Throws kInvalidArgument when |D| < 2 or the size is outside
// [1, |D|].
double true_variance(std::span<const double> contributions, uint64_t sample_size);

struct Interval {
  double lower;
  double upper;
};

// estimator + sigma * Phi^-1((1 - conf) / 2) and estimator + sigma *
// Phi^-1(conf + (1 - conf) / 2) with sigma = sqrt(est_var).
Interval bounds(double estimator, double est_var, double confidence);

// Sum of stratum estimators and of their variances. An undefined stratum
// (dead node, or fewer than two local samples) makes the variance infinite.
// Throws kInvalidArgument on an empty list.
struct StratumInput {
  bool defined = true;
  StratumEstimate estimate;
};
Outcome<StratumEstimate> stratified_combine(std::span<const StratumInput> strata);

// Estimate plus bounds for one sample under the single-estimator model. Returns kInsufficientSample when
// count < 2 unless the sample covers the whole population.
Outcome<Estimate> estimate_from_moments(const Moments& m, uint64_t population, double confidence);

// Bounds around an already combined stratified estimator.
Estimate estimate_from_stratum(const StratumEstimate& s, double confidence);

// Local stratum estimator from the node's moments and |D_i|. Exact (zero
// variance) when the sample covers the stratum; kInsufficientSample when
// count < 2 otherwise.
Outcome<StratumEstimate> stratum_from_moments(const Moments& m, uint64_t local_population);

}  // namespace olagg::estimation
