#include "olagg/harness/experiment.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "olagg/core/error.h"
#include "olagg/randomizer/generators.h"
#include "olagg/randomizer/shuffle.h"

namespace olagg::harness {

const char* generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kUniform: return "uniform";
    case GeneratorKind::kZipf: return "zipf";
    case GeneratorKind::kOutlier: return "outlier";
    case GeneratorKind::kLineitem: return "lineitem";
    case GeneratorKind::kSupplier: return "supplier";
  }
  return "?";
}

GeneratorKind parse_generator(std::string_view name) {
  for (auto k : {GeneratorKind::kUniform, GeneratorKind::kZipf, GeneratorKind::kOutlier, GeneratorKind::kLineitem,
                 GeneratorKind::kSupplier}) {
    if (name == generator_name(k)) return k;
  }
  raise(ErrorCode::kInvalidArgument, "unknown generator '" + std::string(name) + "'");
}

Table generate(const GeneratorSpec& spec, uint64_t seed) {
  switch (spec.kind) {
    case GeneratorKind::kUniform: return randomizer::gen_uniform(spec.n, spec.lo, spec.hi, seed);
    case GeneratorKind::kZipf: return randomizer::gen_zipf(spec.n, spec.domain, spec.skew, seed);
    case GeneratorKind::kOutlier: return randomizer::gen_outlier(spec.n, spec.outliers, spec.magnitude, seed);
    case GeneratorKind::kLineitem: return randomizer::gen_lineitem_like(spec.n, seed);
    case GeneratorKind::kSupplier: return randomizer::gen_supplier_like(spec.n, seed);
  }
  raise(ErrorCode::kInvalidArgument, "unknown generator");
}

void ExperimentSpec::validate() const {
  if (trials < 1) raise(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (snapshot_ms < 1) raise(ErrorCode::kInvalidArgument, "snapshot period must be > 0");
  if (nodes < 1) raise(ErrorCode::kInvalidArgument, "need at least one node");
  if (models.empty()) raise(ErrorCode::kInvalidArgument, "no estimation model selected");
  validate_confidence(confidence);
  engine.validate(nodes);
}

PartitionedDataset prepare(const Table& data, uint32_t nodes, uint64_t seed, bool local_only) {
  randomizer::RandomizeOptions o;
  o.nodes = nodes;
  o.seed = seed;
  o.local_only = local_only;
  return randomizer::globally_randomize(data, o);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double hi = values[mid];
  if (values.size() % 2) return hi;
  double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2;
}

}  // namespace olagg::harness
