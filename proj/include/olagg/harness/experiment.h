#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "olagg/core/dataset.h"
#include "olagg/core/plan.h"
#include "olagg/engine/config.h"

namespace olagg::harness {

enum class GeneratorKind { kUniform, kZipf, kOutlier, kLineitem, kSupplier };

const char* generator_name(GeneratorKind kind);  // uniform | zipf | outlier | lineitem | supplier
GeneratorKind parse_generator(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniform;
  uint64_t n = 1000;
  int64_t lo = 1;  // uniform
  int64_t hi = 100;
  uint64_t domain = 1000;  // zipf
  double skew = 1.0;
  uint64_t outliers = 1;  // outlier
  int64_t magnitude = 1'000'000'000;
};

Table generate(const GeneratorSpec& spec, uint64_t seed);

struct ExperimentSpec {
  GeneratorSpec data;
  uint32_t nodes = 8;
  std::vector<EstimationModel> models{EstimationModel::kSingleAsync};
  double confidence = 0.95;
  uint32_t trials = 1;
  uint32_t snapshot_ms = 100;
  uint64_t seed = 1;
  bool local_only = false;
  engine::EngineConfig engine;  // carries the fault plan
  std::string out;

  // Throws kInvalidArgument for trials < 1, snapshot period 0, nodes < 1 or
  // invalid confidence.
  void validate() const;
};

// Generated data shuffled onto `nodes` partitions.
PartitionedDataset prepare(const Table& data, uint32_t nodes, uint64_t seed, bool local_only = false);

double median(std::vector<double> values);

}  // namespace olagg::harness
