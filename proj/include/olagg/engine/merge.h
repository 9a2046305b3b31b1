#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "olagg/uda/gla.h"

namespace olagg::engine {

enum class Topology { kCentralized, kBinaryTree };

const char* topology_name(Topology t);  // "centralized" | "tree"
Topology parse_topology(std::string_view name);

enum class MergeKind {
  kPlain,      // Gla::merge
  kEstimator,  // Gla::estimator_merge, for estimator-terminated states
};

// Folds every state exactly once. Centralized folds left to right into the
// first state; the tree merges neighbours level by level until one remains.
// Throws kInvalidArgument on an empty list.
std::unique_ptr<uda::Gla> merge_topology(std::vector<std::unique_ptr<uda::Gla>> states, Topology topology,
                                         MergeKind kind = MergeKind::kPlain);

}  // namespace olagg::engine
