#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "olagg/core/chunk.h"
#include "olagg/core/table.h"

namespace olagg {

struct PartitionMeta {
  NodeId node_id = 0;
  uint64_t local_cardinality = 0;

  friend bool operator==(const PartitionMeta&, const PartitionMeta&) = default;
};

struct DatasetMeta {
  uint64_t total_cardinality = 0;
  std::vector<PartitionMeta> partitions;

  // Throws kInvalidArgument unless |D| = sum of |D_i| and node ids are unique.
  void validate() const;
  uint64_t local_cardinality(NodeId node) const;

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

// Partition i is held by node i.
struct PartitionedDataset {
  std::vector<std::shared_ptr<const Table>> partitions;
  DatasetMeta meta;

  const Schema& schema() const { return partitions.at(0)->schema(); }
};

DatasetMeta meta_for(const std::vector<std::shared_ptr<const Table>>& partitions);

// CSV with a `name:kind,...` header line. Strings may not contain commas or
// newlines; reals are written in shortest round-trip form.
Table read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Table& table);

std::string meta_to_json(const DatasetMeta& meta);
DatasetMeta meta_from_json(const std::string& text);

// `dir/part-<node_id>.csv` per partition plus `dir/meta.json`.
void write_partitioned(const std::filesystem::path& dir, const PartitionedDataset& data);
PartitionedDataset load_partitioned(const std::filesystem::path& dir);

}  // namespace olagg
