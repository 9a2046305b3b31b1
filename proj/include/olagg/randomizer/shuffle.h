#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "olagg/core/dataset.h"
#include "olagg/core/table.h"
#include "olagg/randomizer/rng.h"

namespace olagg::randomizer {

// Per-item draw by input position.
using DrawFn = std::function<uint64_t(std::size_t)>;
using UnitDrawFn = std::function<double(std::size_t)>;

// Fragment index of item i is assigner(draw(i)).
std::vector<std::vector<std::size_t>> split_indices(std::size_t n, const HashAssigner& assigner, const DrawFn& draw);

// Order of positions sorted by draw, ties broken by position.
std::vector<std::size_t> permutation_order(std::size_t n, const UnitDrawFn& draw);

template <typename T>
std::vector<std::vector<T>> random_split(std::span<const T> items, const HashAssigner& assigner, const DrawFn& draw) {
  auto idx = split_indices(items.size(), assigner, draw);
  std::vector<std::vector<T>> out(idx.size());
  for (std::size_t f = 0; f < idx.size(); ++f) {
    out[f].reserve(idx[f].size());
    for (std::size_t i : idx[f]) out[f].push_back(items[i]);
  }
  return out;
}

template <typename T>
std::vector<T> random_permutation(std::span<const T> items, const UnitDrawFn& draw) {
  std::vector<T> out;
  out.reserve(items.size());
  for (std::size_t i : permutation_order(items.size(), draw)) out.push_back(items[i]);
  return out;
}

std::vector<Table> random_split(const Table& local, const HashAssigner& assigner, const DrawFn& draw);
// Permutes the concatenation of `fragments`.
Table random_permutation(std::span<const Table> fragments, const UnitDrawFn& draw);

struct RandomizeOptions {
  uint32_t nodes = 1;
  uint64_t seed = 0;
  // Rows are treated as `source_nodes` contiguous blocks, one per origin
  // node's local data. Zero means the same as `nodes`.
  uint32_t source_nodes = 0;
  // Skip the split stage: each origin permutes its own block in place.
  bool local_only = false;
};

// Split then per-node permutation with fresh draws. Partition i is node i.
// Throws kInvalidArgument when nodes < 1.
PartitionedDataset globally_randomize(const Table& data, const RandomizeOptions& options);

}  // namespace olagg::randomizer
