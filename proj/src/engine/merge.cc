#include "olagg/engine/merge.h"

#include <string>

#include "olagg/core/error.h"

namespace olagg::engine {

const char* topology_name(Topology t) { return t == Topology::kCentralized ? "centralized" : "tree"; }

Topology parse_topology(std::string_view name) {
  if (name == "centralized") return Topology::kCentralized;
  if (name == "tree") return Topology::kBinaryTree;
  raise(ErrorCode::kInvalidArgument, "unknown topology '" + std::string(name) + "'");
}

namespace {

void fold(uda::Gla& into, const uda::Gla& from, MergeKind kind) {
  if (kind == MergeKind::kPlain) {
    into.merge(from);
  } else {
    into.estimator_merge(from);
  }
}

}  // namespace

std::unique_ptr<uda::Gla> merge_topology(std::vector<std::unique_ptr<uda::Gla>> states, Topology topology,
                                         MergeKind kind) {
  if (states.empty()) raise(ErrorCode::kInvalidArgument, "nothing to merge");
  if (topology == Topology::kCentralized) {
    for (std::size_t i = 1; i < states.size(); ++i) fold(*states[0], *states[i], kind);
    return std::move(states[0]);
  }
  while (states.size() > 1) {
    std::vector<std::unique_ptr<uda::Gla>> next;
    next.reserve((states.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < states.size(); i += 2) {
      fold(*states[i], *states[i + 1], kind);
      next.push_back(std::move(states[i]));
    }
    if (states.size() % 2) next.push_back(std::move(states.back()));
    states = std::move(next);
  }
  return std::move(states[0]);
}

}  // namespace olagg::engine
